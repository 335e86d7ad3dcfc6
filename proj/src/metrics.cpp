#include "oim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "oim/error.hpp"
#include "oim/io.hpp"

namespace oim {

namespace {

constexpr double kPi = std::numbers::pi;

double domain_factor(PhaseDomain domain) { return domain == PhaseDomain::Doubled ? 2.0 : 1.0; }

}  // namespace

double wrap_signed(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double order_parameter(std::span<const double> phases) {
  if (phases.empty()) throw ParameterError("order parameter needs at least one phase");
  double c = 0.0;
  double s = 0.0;
  for (double p : phases) {
    c += std::cos(2.0 * p);
    s += std::sin(2.0 * p);
  }
  const double r = std::hypot(c, s) / static_cast<double>(phases.size());
  return std::min(r, 1.0);
}

double circular_mean(std::span<const double> phases, PhaseDomain domain) {
  const double f = domain_factor(domain);
  double c = 0.0;
  double s = 0.0;
  for (double p : phases) {
    c += std::cos(f * p);
    s += std::sin(f * p);
  }
  // Resultant below rounding noise: the mean direction is undefined.
  if (std::hypot(c, s) <= 1e-12 * static_cast<double>(phases.size())) return 0.0;
  return std::atan2(s, c);
}

double phase_lock_error(std::span<const double> phases, PhaseDomain domain) {
  const std::size_t n = phases.size();
  if (n < 2) throw ParameterError("phase-lock error needs at least two oscillators");
  const double f = domain_factor(domain);
  const double mean = circular_mean(phases, domain);
  double sum_sq = 0.0;
  for (double p : phases) {
    const double d = wrap_signed(f * p - mean);
    sum_sq += d * d;
  }
  return std::sqrt(2.0 / static_cast<double>(n - 1) * sum_sq);
}

void LockCriteria::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ParameterError("lock threshold must lie in (0, 1)");
  }
  if (hold_samples == 0) throw ParameterError("hold_samples must be positive");
}

LockReport lock_time(std::span<const double> order_trace, std::span<const double> times,
                     const LockCriteria& criteria) {
  criteria.validate();
  if (order_trace.size() != times.size()) {
    throw DimensionError("order-parameter trace and time axis differ in length");
  }
  if (criteria.hold_samples > order_trace.size()) {
    throw ParameterError("hold window of " + std::to_string(criteria.hold_samples) +
                         " samples is longer than the trace (" +
                         std::to_string(order_trace.size()) + ")");
  }
  LockReport report;
  report.threshold = criteria.threshold;
  report.hold_samples = criteria.hold_samples;

  std::size_t run = 0;  // consecutive samples at or above threshold
  for (std::size_t k = 0; k < order_trace.size(); ++k) {
    run = order_trace[k] >= criteria.threshold ? run + 1 : 0;
    if (run == criteria.hold_samples) {
      report.lock_time = times[k + 1 - criteria.hold_samples];
      report.locked = true;
      break;
    }
  }
  return report;
}

SpinAssignment binarize(std::span<const double> phases, double reference) {
  std::vector<int> spins(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    spins[i] = std::abs(wrap_signed(phases[i] - reference)) <= kPi / 2.0 ? 1 : -1;
  }
  return SpinAssignment(std::move(spins));
}

double readout_reference(const DynamicsConfig& cfg, std::span<const double> phases) {
  const bool injects = cfg.mode == DynamicsMode::Distributed ||
                       cfg.mode == DynamicsMode::Centralized;
  if (injects) return cfg.injection_phase;
  return 0.5 * circular_mean(phases, PhaseDomain::Doubled);
}

Score score_state(std::span<const double> phases, const IsingInstance& inst,
                  const MaxCutInstance& g, const DynamicsConfig& cfg) {
  SpinAssignment spins = binarize(phases, readout_reference(cfg, phases));
  const double energy = hamiltonian_energy(inst, spins);
  const double cut = cut_value(g, spins);
  return Score{std::move(spins), energy, cut};
}

Score score_trajectory(const Trajectory& traj, const IsingInstance& inst,
                       const MaxCutInstance& g, const DynamicsConfig& cfg) {
  if (traj.empty()) throw ContractError("cannot score an empty trajectory");
  return score_state(traj.row(traj.sample_count() - 1), inst, g, cfg);
}

MetricTraces compute_traces(const Trajectory& traj, const IsingInstance& inst,
                            const DynamicsConfig& cfg) {
  MetricTraces out;
  const std::size_t m = traj.sample_count();
  out.order_parameter.reserve(m);
  out.phase_error.reserve(m);
  out.energy.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto row = traj.row(k);
    out.order_parameter.push_back(order_parameter(row));
    out.phase_error.push_back(row.size() >= 2 ? phase_lock_error(row) : 0.0);
    out.energy.push_back(hamiltonian_energy(inst, binarize(row, readout_reference(cfg, row))));
  }
  return out;
}

void write_metrics_csv(std::ostream& out, std::span<const double> times,
                       const MetricTraces& traces) {
  out << "t,R,e_theta,energy\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_significant(times[k]) << ',' << format_significant(traces.order_parameter[k])
        << ',' << format_significant(traces.phase_error[k]) << ','
        << format_significant(traces.energy[k]) << '\n';
  }
}

}  // namespace oim

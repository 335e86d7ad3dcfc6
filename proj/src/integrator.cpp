#include "oim/integrator.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "oim/error.hpp"
#include "oim/io.hpp"

namespace oim {

void IntegratorConfig::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) throw ParameterError("dt must be > 0");
  if (!std::isfinite(t_end) || t_end <= 0.0) throw ParameterError("t_end must be > 0");
  if (!(dt < t_end)) throw ParameterError("dt must be smaller than t_end");
  if (t_end / dt > kMaxSteps) throw ParameterError("t_end / dt exceeds 1e8 steps");
  if (record_every == 0) throw ParameterError("record_every must be positive");
}

std::size_t IntegratorConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

void Trajectory::append(double t, std::span<const double> phases) {
  if (phases.size() != n_) throw DimensionError("trajectory row has the wrong length");
  times_.push_back(t);
  data_.insert(data_.end(), phases.begin(), phases.end());
}

std::span<const double> Trajectory::row(std::size_t k) const {
  return std::span<const double>(data_).subspan(k * n_, n_);
}

PhaseState Trajectory::state(std::size_t k) const {
  const auto r = row(k);
  return PhaseState{std::vector<double>(r.begin(), r.end()), times_[k]};
}

PhaseState Trajectory::final_state() const {
  if (empty()) throw ContractError("trajectory is empty");
  return state(sample_count() - 1);
}

PhaseState initial_phases(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("need at least one oscillator");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  PhaseState s;
  s.phases.resize(n);
  for (auto& p : s.phases) p = dist(rng);
  return s;
}

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

Trajectory integrate_field(const PhaseField& field, const IntegratorConfig& icfg,
                           const PhaseState& init, double noise_amplitude) {
  icfg.validate();
  const std::size_t n = init.phases.size();
  if (n == 0) throw DimensionError("empty initial state");
  if (!all_finite(init.phases)) throw DivergenceError(0);

  const std::size_t steps = icfg.step_count();
  const double dt = icfg.dt;
  const double t0 = init.time;

  std::vector<double> x = init.phases;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  std::mt19937_64 rng(icfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_scale = noise_amplitude * std::sqrt(dt);

  Trajectory traj(n);
  traj.append(t0, x);

  for (std::size_t step = 1; step <= steps; ++step) {
    const double t = t0 + static_cast<double>(step - 1) * dt;
    if (noise_amplitude > 0.0) {
      field(x, t, k1);
      for (std::size_t i = 0; i < n; ++i) x[i] += dt * k1[i] + noise_scale * gauss(rng);
    } else {
      field(x, t, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
      field(tmp, t + 0.5 * dt, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
      field(tmp, t + 0.5 * dt, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
      field(tmp, t + dt, k4);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    if (!all_finite(x)) throw DivergenceError(step);
    if (step % icfg.record_every == 0 || step == steps) {
      traj.append(t0 + static_cast<double>(step) * dt, x);
    }
  }
  return traj;
}

Trajectory integrate(const IsingInstance& inst, const DynamicsConfig& dyn,
                     const IntegratorConfig& icfg, const PhaseState& init) {
  dyn.validate(inst.size());
  if (init.phases.size() != inst.size()) {
    throw DimensionError("initial state has " + std::to_string(init.phases.size()) +
                         " phases, instance has " + std::to_string(inst.size()));
  }
  PhaseField field = [&](std::span<const double> x, double t, std::span<double> out) {
    rhs_into(inst, dyn, x, t, out);
  };
  return integrate_field(field, icfg, init, dyn.noise_amplitude);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  for (std::size_t i = 0; i < traj.oscillators(); ++i) out << ",theta_" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.sample_count(); ++k) {
    out << format_significant(traj.times()[k]);
    for (double p : traj.row(k)) out << ',' << format_significant(p);
    out << '\n';
  }
}

}  // namespace oim

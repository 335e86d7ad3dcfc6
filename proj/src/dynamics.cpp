#include "oim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oim/error.hpp"

namespace oim {

namespace {

void require_finite_nonnegative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ParameterError(std::string(name) + " must be finite and >= 0");
  }
}

void require_state_size(const IsingInstance& inst, std::size_t got) {
  if (got != inst.size()) {
    throw DimensionError("phase state has " + std::to_string(got) +
                         " entries, instance has " + std::to_string(inst.size()));
  }
}

double coupling_sum(const IsingInstance& inst, std::span<const double> phases,
                    std::size_t i) {
  double acc = 0.0;
  for (const auto& c : inst.neighbors(i)) acc += c.value * std::sin(phases[i] - phases[c.j]);
  return acc;
}

}  // namespace

void DynamicsConfig::validate(std::size_t n) const {
  require_finite_nonnegative(sigma, "sigma");
  require_finite_nonnegative(kappa_s, "kappa_s");
  require_finite_nonnegative(noise_amplitude, "noise_amplitude");
  if (!std::isfinite(injection_phase) || !std::isfinite(injection_detuning)) {
    throw ParameterError("injection phase and detuning must be finite");
  }
  if (!natural_freqs.empty()) {
    if (natural_freqs.size() != n) {
      throw DimensionError("natural_freqs has " + std::to_string(natural_freqs.size()) +
                           " entries, expected " + std::to_string(n));
    }
    for (double w : natural_freqs) {
      if (!std::isfinite(w)) throw ParameterError("natural frequencies must be finite");
    }
    const bool any_nonzero =
        std::any_of(natural_freqs.begin(), natural_freqs.end(), [](double w) { return w != 0.0; });
    if (any_nonzero && mode != DynamicsMode::Free) {
      throw ParameterError("nonzero natural frequencies are only supported in free mode");
    }
  }
}

std::string to_string(DynamicsMode mode) {
  switch (mode) {
    case DynamicsMode::Free: return "free";
    case DynamicsMode::CoupledOnly: return "coupled";
    case DynamicsMode::Distributed: return "distributed";
    case DynamicsMode::Centralized: return "centralized";
  }
  return "unknown";
}

std::string to_string(InjectionVariant variant) {
  switch (variant) {
    case InjectionVariant::PhaseIndependent: return "phase_independent";
    case InjectionVariant::Adler: return "adler";
    case InjectionVariant::SubHarmonic: return "subharmonic";
  }
  return "unknown";
}

DynamicsMode parse_mode(const std::string& name) {
  for (auto m : {DynamicsMode::Free, DynamicsMode::CoupledOnly, DynamicsMode::Distributed,
                 DynamicsMode::Centralized}) {
    if (to_string(m) == name) return m;
  }
  throw ParameterError("unknown dynamics mode '" + name +
                       "' (expected free, coupled, distributed or centralized)");
}

InjectionVariant parse_variant(const std::string& name) {
  for (auto v : {InjectionVariant::PhaseIndependent, InjectionVariant::Adler,
                 InjectionVariant::SubHarmonic}) {
    if (to_string(v) == name) return v;
  }
  throw ParameterError("unknown injection variant '" + name +
                       "' (expected phase_independent, adler or subharmonic)");
}

double injection_phase_at(const DynamicsConfig& cfg, double t) {
  return cfg.injection_detuning * t + cfg.injection_phase;
}

double injection_term(const DynamicsConfig& cfg, double theta_i, double t) {
  const double inj = injection_phase_at(cfg, t);
  switch (cfg.variant) {
    case InjectionVariant::PhaseIndependent: return -cfg.kappa_s * std::sin(inj);
    case InjectionVariant::Adler: return -cfg.kappa_s * std::sin(theta_i - inj);
    case InjectionVariant::SubHarmonic: return -cfg.kappa_s * std::sin(2.0 * theta_i - inj);
  }
  return 0.0;
}

double coupling_term(const IsingInstance& inst, const DynamicsConfig& cfg,
                     const PhaseState& state, std::size_t i) {
  require_state_size(inst, state.phases.size());
  if (i >= inst.size()) throw DimensionError("oscillator index out of range");
  return -cfg.sigma * coupling_sum(inst, state.phases, i);
}

void rhs_into(const IsingInstance& inst, const DynamicsConfig& cfg,
              std::span<const double> phases, double t, std::span<double> out) {
  const std::size_t n = inst.size();
  require_state_size(inst, phases.size());
  if (out.size() != n) throw DimensionError("rhs output buffer has the wrong length");

  for (std::size_t i = 0; i < n; ++i) out[i] = -cfg.sigma * coupling_sum(inst, phases, i);

  switch (cfg.mode) {
    case DynamicsMode::Free:
      if (!cfg.natural_freqs.empty()) {
        for (std::size_t i = 0; i < n; ++i) out[i] += cfg.natural_freqs[i];
      }
      break;
    case DynamicsMode::CoupledOnly:
      break;
    case DynamicsMode::Distributed:
      for (std::size_t i = 0; i < n; ++i) out[i] += injection_term(cfg, phases[i], t);
      break;
    case DynamicsMode::Centralized: {
      // sum_j sin(a_i - a_j) = sin a_i * C - cos a_i * S, the j = i term is 0.
      double sum_sin = 0.0;
      double sum_cos = 0.0;
      for (double p : phases) {
        sum_sin += std::sin(p);
        sum_cos += std::cos(p);
      }
      const double common = -cfg.kappa_s * std::sin(injection_phase_at(cfg, t));
      for (std::size_t i = 0; i < n; ++i) {
        const double interference =
            std::sin(phases[i]) * sum_cos - std::cos(phases[i]) * sum_sin;
        out[i] += injection_term(cfg, phases[i], t) - cfg.kappa_s * interference + common;
      }
      break;
    }
  }
}

std::vector<double> rhs(const IsingInstance& inst, const DynamicsConfig& cfg,
                        const PhaseState& state) {
  std::vector<double> out(inst.size());
  rhs_into(inst, cfg, state.phases, state.time, out);
  return out;
}

double potential_energy(const IsingInstance& inst, const DynamicsConfig& cfg,
                        const PhaseState& state) {
  require_state_size(inst, state.phases.size());
  const bool coupled = cfg.mode == DynamicsMode::CoupledOnly;
  const bool locked_gradient = cfg.mode == DynamicsMode::Distributed &&
                               cfg.variant == InjectionVariant::SubHarmonic;
  if (!coupled && !locked_gradient) {
    throw ContractError("potential energy is only defined for coupled mode or "
                        "distributed mode with subharmonic injection");
  }
  if (cfg.injection_detuning != 0.0) {
    throw ContractError("potential energy requires zero injection detuning");
  }

  const auto& th = state.phases;
  // Each unordered pair once: the 1/2 cancels the double sum over i != j.
  double e = 0.0;
  for (const auto& p : inst.pairs()) e -= cfg.sigma * p.weight * std::cos(th[p.u] - th[p.v]);
  if (locked_gradient) {
    double inj = 0.0;
    for (double x : th) inj += std::cos(2.0 * x - cfg.injection_phase);
    e -= 0.5 * cfg.kappa_s * inj;
  }
  return e;
}

std::vector<double> centered_normal_frequencies(std::size_t n, double spread,
                                                std::uint64_t seed) {
  require_finite_nonnegative(spread, "frequency spread");
  std::vector<double> w(n, 0.0);
  if (n == 0 || spread == 0.0) return w;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, spread);
  for (auto& x : w) x = dist(rng);
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);
  for (auto& x : w) x -= mean;
  return w;
}

}  // namespace oim

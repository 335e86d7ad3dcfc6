#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oim/ising.hpp"

namespace oim {

// Phases in radians, never wrapped; wrapping only happens in metrics.
struct PhaseState {
  std::vector<double> phases;
  double time = 0.0;
};

enum class DynamicsMode {
  Free,         // theta_i' = omega_i - sigma sum_j J_ij sin(theta_i - theta_j)
  CoupledOnly,  // rotating frame, omega eliminated
  Distributed,  // CoupledOnly + per-oscillator injection
  Centralized,  // Distributed + shared-routing interference and common drive
};

// Form of the per-oscillator injection contribution.
enum class InjectionVariant {
  PhaseIndependent,  // -kappa_s sin(theta_inj(t)); same for every oscillator
  Adler,             // -kappa_s sin(theta_i - theta_inj(t))
  SubHarmonic,       // -kappa_s sin(2 theta_i - theta_inj(t)); locks to {0, pi}
};

struct DynamicsConfig {
  double sigma = 1.0;    // coupling strength
  double kappa_s = 1.0;  // injection strength
  DynamicsMode mode = DynamicsMode::Distributed;
  InjectionVariant variant = InjectionVariant::SubHarmonic;
  // Empty means all zero. Only Free mode may carry nonzero entries.
  std::vector<double> natural_freqs;
  double injection_phase = 0.0;
  double injection_detuning = 0.0;
  double noise_amplitude = 0.0;

  // Throws ParameterError / DimensionError on a config that is invalid for
  // an n-oscillator system.
  void validate(std::size_t n) const;
};

std::string to_string(DynamicsMode mode);
std::string to_string(InjectionVariant variant);
DynamicsMode parse_mode(const std::string& name);
InjectionVariant parse_variant(const std::string& name);

// theta_inj(t) = detuning * t + phase
double injection_phase_at(const DynamicsConfig& cfg, double t);

double injection_term(const DynamicsConfig& cfg, double theta_i, double t);

// -sigma sum_{j != i} J_ij sin(theta_i - theta_j)
double coupling_term(const IsingInstance& inst, const DynamicsConfig& cfg,
                     const PhaseState& state, std::size_t i);

// Time derivative of every phase for the configured mode.
std::vector<double> rhs(const IsingInstance& inst, const DynamicsConfig& cfg,
                        const PhaseState& state);

// Allocation-free form used by the integrator. `out` must have inst.size()
// entries.
void rhs_into(const IsingInstance& inst, const DynamicsConfig& cfg,
              std::span<const double> phases, double t, std::span<double> out);

// Lyapunov function of the gradient-flow modes:
//   E = -(sigma/2) sum_{i != j} J_ij cos(theta_i - theta_j)
//       - (kappa_s/2) sum_i cos(2 theta_i - phi_inj)
// with rhs = -grad E. Defined for CoupledOnly (no injection part) and for
// Distributed/SubHarmonic with zero detuning; anything else throws
// ContractError.
double potential_energy(const IsingInstance& inst, const DynamicsConfig& cfg,
                        const PhaseState& state);

// Natural frequencies drawn N(0, spread^2) and shifted to zero mean, i.e.
// expressed in the frame rotating at the population's mean frequency.
std::vector<double> centered_normal_frequencies(std::size_t n, double spread,
                                                std::uint64_t seed);

}  // namespace oim

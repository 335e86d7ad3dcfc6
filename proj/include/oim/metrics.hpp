#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "oim/dynamics.hpp"
#include "oim/integrator.hpp"
#include "oim/ising.hpp"

namespace oim {

// R = |mean_i exp(2 j theta_i)|. Both 0 and pi register as aligned.
double order_parameter(std::span<const double> phases);
inline double order_parameter(const PhaseState& s) { return order_parameter(s.phases); }

enum class PhaseDomain {
  Doubled,  // psi_i = 2 theta_i: binary {0, pi} locking counts as zero error
  Raw,      // psi_i = theta_i
};

// Circular mean direction of psi_i, 0 when the resultant vanishes.
double circular_mean(std::span<const double> phases, PhaseDomain domain);

// sqrt(2/(N-1) * sum_i d_i^2), d_i the signed circular distance in
// (-pi, pi] of psi_i from its circular mean. Needs N >= 2.
double phase_lock_error(std::span<const double> phases,
                        PhaseDomain domain = PhaseDomain::Doubled);
inline double phase_lock_error(const PhaseState& s,
                               PhaseDomain domain = PhaseDomain::Doubled) {
  return phase_lock_error(s.phases, domain);
}

// Wraps into (-pi, pi].
double wrap_signed(double angle);

struct LockCriteria {
  double threshold = 0.9;
  std::size_t hold_samples = 50;

  void validate() const;
};

struct LockReport {
  std::optional<double> lock_time;
  double threshold = 0.9;
  std::size_t hold_samples = 50;
  bool locked = false;
};

// Earliest t_k with R(t_j) >= threshold for every j in [k, k + hold).
LockReport lock_time(std::span<const double> order_trace, std::span<const double> times,
                     const LockCriteria& criteria);

// +1 when theta_i - reference is within pi/2 of 0 (inclusive), else -1.
SpinAssignment binarize(std::span<const double> phases, double reference);
inline SpinAssignment binarize(const PhaseState& s, double reference) {
  return binarize(s.phases, reference);
}

// Phase that binarization is measured against: the injection phase when the
// mode injects, otherwise half the circular mean of the doubled phases.
double readout_reference(const DynamicsConfig& cfg, std::span<const double> phases);

struct Score {
  SpinAssignment spins;
  double energy;
  double cut;
};

Score score_state(std::span<const double> phases, const IsingInstance& inst,
                  const MaxCutInstance& g, const DynamicsConfig& cfg);

// Binarizes the last recorded sample.
Score score_trajectory(const Trajectory& traj, const IsingInstance& inst,
                       const MaxCutInstance& g, const DynamicsConfig& cfg);

struct MetricTraces {
  std::vector<double> order_parameter;
  std::vector<double> phase_error;
  // Ising energy of each sample's binarized readout.
  std::vector<double> energy;
};

MetricTraces compute_traces(const Trajectory& traj, const IsingInstance& inst,
                            const DynamicsConfig& cfg);

// Columns t,R,e_theta,energy.
void write_metrics_csv(std::ostream& out, std::span<const double> times,
                       const MetricTraces& traces);

}  // namespace oim

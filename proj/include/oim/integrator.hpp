#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "oim/dynamics.hpp"
#include "oim/ising.hpp"

namespace oim {

struct IntegratorConfig {
  double dt = 0.01;
  double t_end = 50.0;
  std::size_t record_every = 5;
  std::uint64_t seed = 0;  // noise stream; initial phases are seeded separately

  inline static constexpr double kMaxSteps = 1e8;

  void validate() const;
  // Number of fixed steps covering [0, t_end].
  std::size_t step_count() const;
};

// Phases sampled every record_every steps, starting at t = 0. The final
// step is always recorded, so the last sample sits at step_count() * dt.
class Trajectory {
 public:
  explicit Trajectory(std::size_t n) : n_(n) {}

  void append(double t, std::span<const double> phases);

  std::size_t oscillators() const noexcept { return n_; }
  std::size_t sample_count() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> row(std::size_t k) const;
  PhaseState state(std::size_t k) const;
  PhaseState final_state() const;

 private:
  std::size_t n_;
  std::vector<double> times_;
  std::vector<double> data_;  // row-major, sample_count x n
};

// i.i.d. uniform on [0, 2 pi), deterministic per seed.
PhaseState initial_phases(std::size_t n, std::uint64_t seed);

// Derivative callback: (phases, t, out).
using PhaseField =
    std::function<void(std::span<const double>, double, std::span<double>)>;

// Fixed-step integration of an arbitrary phase field. Classic RK4 when
// noise_amplitude is 0, otherwise Euler-Maruyama with N(0, noise^2 dt)
// increments drawn from a generator seeded by icfg.seed. Throws
// DivergenceError naming the first step that produced a non-finite value.
Trajectory integrate_field(const PhaseField& field, const IntegratorConfig& icfg,
                           const PhaseState& init, double noise_amplitude);

Trajectory integrate(const IsingInstance& inst, const DynamicsConfig& dyn,
                     const IntegratorConfig& icfg, const PhaseState& init);

// Columns t,theta_0,...,theta_{n-1}; 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace oim

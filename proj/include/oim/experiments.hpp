#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oim/dynamics.hpp"
#include "oim/integrator.hpp"
#include "oim/ising.hpp"
#include "oim/metrics.hpp"

namespace oim {

// Circuit currents are not modeled: sigma stands in for the oscillator supply
// current and kappa_s for the injection current.
enum class SweepParameter { Sigma, KappaS };

std::string to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& name);

// Ten oscillators on a complete graph with seeded +-1 weights.
inline constexpr std::size_t kReferenceSize = 10;
inline constexpr std::uint64_t kReferenceSeed = 1;
MaxCutInstance reference_instance(std::uint64_t seed = kReferenceSeed);

// FNV-1a over the bit patterns of the phases; used to check that paired runs
// start from the same state.
std::uint64_t state_hash(std::span<const double> phases);

// Everything observed from one seeded integration.
struct RunOutcome {
  std::optional<double> lock_time;
  double final_R = 0.0;
  double final_error = 0.0;
  std::optional<Score> final_score;
  double best_cut = 0.0;
  bool diverged = false;
  std::size_t divergence_step = 0;
  std::uint64_t initial_hash = 0;
};

// Integrates from initial_phases(n, seed) with icfg.seed = seed and scores
// the result. Divergence is captured in the outcome, not thrown.
RunOutcome run_seeded(const MaxCutInstance& graph, const IsingInstance& inst,
                      const DynamicsConfig& dyn, IntegratorConfig icfg,
                      const LockCriteria& lock, std::uint64_t seed);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Sigma;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<DynamicsMode> modes{DynamicsMode::Distributed, DynamicsMode::Centralized};
  DynamicsConfig base_dynamics;
  IntegratorConfig base_integrator;
  LockCriteria lock;
  MaxCutInstance graph = reference_instance();

  void validate() const;
};

struct SweepRow {
  double parameter_value = 0.0;
  std::uint64_t seed = 0;
  DynamicsMode mode = DynamicsMode::Distributed;
  std::optional<double> lock_time;
  double final_R = 0.0;
  double final_error = 0.0;
  double final_energy = 0.0;
  double best_cut = 0.0;
  bool diverged = false;
  std::uint64_t initial_hash = 0;
};

// One row per (value, seed, mode), ordered by value, then seed, then mode in
// the order listed in the spec. Output does not depend on `threads`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t threads = 1);

// Header param,value,seed,mode,lock_time,final_R,final_error,final_energy,best_cut.
// Missing lock times are empty fields; diverged rows leave every metric empty.
void write_sweep_csv(std::ostream& out, SweepParameter parameter,
                     const std::vector<SweepRow>& rows);

struct PairedRun {
  std::uint64_t seed = 0;
  RunOutcome distributed;
  RunOutcome centralized;
};

struct ComparisonSummary {
  std::optional<double> median_lock_distributed;
  std::optional<double> median_lock_centralized;
  std::optional<double> speedup;
  std::optional<double> win_fraction;
  std::optional<double> median_error_distributed;
  std::optional<double> median_error_centralized;
  std::size_t n_seeds = 0;
  std::size_t n_locked_pairs = 0;
  std::size_t n_locked_distributed = 0;
  std::size_t n_locked_centralized = 0;
  // False when fewer than half of the seeds locked in that mode; the mode's
  // median lock time is then absent.
  bool distributed_locking = false;
  bool centralized_locking = false;
  std::vector<PairedRun> pairs;
};

inline constexpr std::size_t kMinComparisonSeeds = 10;

// Paired Distributed/Centralized runs from identical initial states.
// speedup = median centralized lock / median distributed lock, medians over
// the runs that locked.
ComparisonSummary compare_modes(const MaxCutInstance& graph, const DynamicsConfig& dyn,
                                const IntegratorConfig& icfg, const LockCriteria& lock,
                                const std::vector<std::uint64_t>& seeds,
                                std::size_t threads = 1);

nlohmann::json to_json(const ComparisonSummary& summary);

struct SolveResult {
  Score best;
  std::uint64_t best_seed = 0;
  std::size_t attempts = 0;
  std::size_t locked = 0;
  std::size_t diverged = 0;
  double lock_fraction = 0.0;
};

// Attempt k uses seed base_seed + k. Returns the attempt with the largest
// cut, ties going to the lower seed. Throws DivergenceError when every
// attempt diverges.
SolveResult solve(const MaxCutInstance& graph, std::size_t attempts,
                  const DynamicsConfig& dyn, const IntegratorConfig& icfg,
                  const LockCriteria& lock, std::uint64_t base_seed,
                  std::size_t threads = 1);

double median(std::vector<double> values);

}  // namespace oim

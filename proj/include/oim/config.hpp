#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oim/dynamics.hpp"
#include "oim/experiments.hpp"
#include "oim/integrator.hpp"
#include "oim/ising.hpp"
#include "oim/metrics.hpp"

namespace oim {

// Where the problem comes from: a graph file, or the seeded generator.
struct InstanceSource {
  std::optional<std::string> graph_path;
  std::size_t n = kReferenceSize;
  double density = 1.0;
  WeightSet weights = WeightSet::PlusMinusOne;
  std::uint64_t seed = kReferenceSeed;

  MaxCutInstance load() const;
};

// Everything a CLI run needs. Defaults here are the documented defaults;
// JSON documents override them and command-line flags override both.
struct RunConfig {
  InstanceSource instance;

  DynamicsConfig dynamics;
  // Nonzero spread replaces natural_freqs by centered N(0, spread^2) draws.
  double natural_freq_spread = 0.0;
  std::uint64_t natural_freq_seed = 0;
  // Unset means "command default": 0.01 for solve, 0 elsewhere.
  std::optional<double> noise_amplitude;

  IntegratorConfig integrator;
  LockCriteria lock;

  std::uint64_t seed_base = 0;
  std::size_t seed_count = 10;

  SweepParameter sweep_parameter = SweepParameter::Sigma;
  std::vector<double> sweep_values{0.0, 0.25, 0.5, 1.0, 2.0};
  std::vector<DynamicsMode> sweep_modes{DynamicsMode::Distributed, DynamicsMode::Centralized};

  std::size_t attempts = 20;

  inline static constexpr double kSolveNoise = 0.01;

  std::vector<std::uint64_t> seeds() const;
  // Dynamics with natural frequencies and noise resolved for an n-spin run.
  DynamicsConfig resolved_dynamics(std::size_t n, double default_noise) const;
  void validate() const;
};

// Strict: unknown keys and wrongly typed values throw ParseError. Relative
// graph paths are resolved against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace oim

// oim: phase-domain oscillator Ising machine simulator.
//
// Exit codes: 0 ok, 2 input parse error, 3 every solve attempt diverged,
// 4 instance too large for exhaustive search, 5 output I/O failure,
// 64 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oim/config.hpp"
#include "oim/error.hpp"
#include "oim/experiments.hpp"
#include "oim/integrator.hpp"
#include "oim/io.hpp"
#include "oim/ising.hpp"
#include "oim/metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitIo = 5;
constexpr int kExitUsage = 64;

using nlohmann::json;

struct GlobalFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool quiet = false;
  CLI::Option* seed_opt = nullptr;
};

// Graph files that cannot be opened are treated like unparsable ones.
oim::MaxCutInstance load_graph(const std::string& path) {
  try {
    return oim::read_graph_file(path);
  } catch (const oim::IoError& e) {
    throw oim::ParseError(0, e.what());
  }
}

oim::RunConfig base_config(const GlobalFlags& g) {
  oim::RunConfig cfg = g.config_path.empty() ? oim::RunConfig{} : oim::load_run_config(g.config_path);
  if (g.seed_opt->count() > 0) cfg.seed_base = g.seed;
  return cfg;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    oim::write_file_atomic(out_path, content);
  }
}

// Flags shared by solve/sweep/compare that override config values.
struct DynamicsFlags {
  double sigma = 0, kappa = 0, dt = 0, t_end = 0, noise = 0, threshold = 0;
  std::size_t record_every = 0, hold = 0;
  std::string mode, variant;
  CLI::Option *sigma_o{}, *kappa_o{}, *dt_o{}, *t_end_o{}, *noise_o{}, *threshold_o{},
      *record_o{}, *hold_o{}, *mode_o{}, *variant_o{};

  void add(CLI::App* app, bool with_mode, double default_noise) {
    const oim::RunConfig d;
    sigma_o = app->add_option("--sigma", sigma, "Coupling strength")->default_val(d.dynamics.sigma);
    kappa_o = app->add_option("--kappa", kappa, "Injection strength kappa_s")
                  ->default_val(d.dynamics.kappa_s);
    if (with_mode) {
      mode_o = app->add_option("--mode", mode, "free | coupled | distributed | centralized")
                   ->default_val(oim::to_string(d.dynamics.mode));
    }
    variant_o = app->add_option("--variant", variant, "phase_independent | adler | subharmonic")
                    ->default_val(oim::to_string(d.dynamics.variant));
    dt_o = app->add_option("--dt", dt, "Integration step")->default_val(d.integrator.dt);
    t_end_o = app->add_option("--t-end", t_end, "Integration horizon")
                  ->default_val(d.integrator.t_end);
    record_o = app->add_option("--record-every", record_every, "Record every k-th step")
                   ->default_val(d.integrator.record_every);
    noise_o = app->add_option("--noise", noise, "Phase-noise amplitude")->default_val(default_noise);
    threshold_o = app->add_option("--threshold", threshold, "Lock threshold on R")
                      ->default_val(d.lock.threshold);
    hold_o = app->add_option("--hold", hold, "Samples R must stay above threshold")
                 ->default_val(d.lock.hold_samples);
  }

  void apply(oim::RunConfig& cfg) const {
    if (sigma_o->count()) cfg.dynamics.sigma = sigma;
    if (kappa_o->count()) cfg.dynamics.kappa_s = kappa;
    if (mode_o && mode_o->count()) cfg.dynamics.mode = oim::parse_mode(mode);
    if (variant_o->count()) cfg.dynamics.variant = oim::parse_variant(variant);
    if (dt_o->count()) cfg.integrator.dt = dt;
    if (t_end_o->count()) cfg.integrator.t_end = t_end;
    if (record_o->count()) cfg.integrator.record_every = record_every;
    if (noise_o->count()) cfg.noise_amplitude = noise;
    if (threshold_o->count()) cfg.lock.threshold = threshold;
    if (hold_o->count()) cfg.lock.hold_samples = hold;
    cfg.validate();
  }
};

int run_solve(const GlobalFlags& g, const std::string& graph_path, std::size_t attempts,
              bool attempts_set, const DynamicsFlags& flags, const std::string& trajectory_out,
              const std::string& metrics_out) {
  oim::RunConfig cfg = base_config(g);
  if (attempts_set) cfg.attempts = attempts;
  flags.apply(cfg);
  const auto graph = load_graph(graph_path);
  cfg.instance.graph_path = graph_path;

  const auto dyn = cfg.resolved_dynamics(graph.size(), oim::RunConfig::kSolveNoise);
  const auto result =
      oim::solve(graph, cfg.attempts, dyn, cfg.integrator, cfg.lock, cfg.seed_base, g.threads);

  if (!trajectory_out.empty() || !metrics_out.empty()) {
    const auto inst = oim::ising_from_maxcut(graph);
    auto icfg = cfg.integrator;
    icfg.seed = result.best_seed;
    const auto traj =
        oim::integrate(inst, dyn, icfg, oim::initial_phases(graph.size(), result.best_seed));
    if (!trajectory_out.empty()) {
      std::ostringstream os;
      oim::write_trajectory_csv(os, traj);
      oim::write_file_atomic(trajectory_out, os.str());
    }
    if (!metrics_out.empty()) {
      std::ostringstream os;
      oim::write_metrics_csv(os, traj.times(), oim::compute_traces(traj, inst, dyn));
      oim::write_file_atomic(metrics_out, os.str());
    }
  }

  auto config = oim::to_json(cfg);
  config["dynamics"]["noise_amplitude"] = dyn.noise_amplitude;
  json out = {{"cut", result.best.cut},
              {"energy", result.best.energy},
              {"spins", std::vector<int>(result.best.spins.values().begin(),
                                         result.best.spins.values().end())},
              {"attempts", result.attempts},
              {"lock_fraction", result.lock_fraction},
              {"best_seed", result.best_seed},
              {"diverged_attempts", result.diverged},
              {"config", config}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_oracle(const std::string& graph_path) {
  const auto graph = load_graph(graph_path);
  const auto gs = oim::brute_force_ground_state(oim::ising_from_maxcut(graph));
  json out = {{"max_cut", 0.5 * (graph.total_weight() - gs.energy)},
              {"ground_energy", gs.energy},
              {"degeneracy", gs.degeneracy},
              {"spins", std::vector<int>(gs.spins.values().begin(), gs.spins.values().end())},
              {"n", graph.size()}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_sweep(const GlobalFlags& g, const DynamicsFlags& flags, const std::string& out_path) {
  oim::RunConfig cfg = base_config(g);
  flags.apply(cfg);
  oim::SweepSpec spec;
  spec.graph = cfg.instance.load();
  spec.parameter = cfg.sweep_parameter;
  spec.values = cfg.sweep_values;
  spec.seeds = cfg.seeds();
  spec.modes = cfg.sweep_modes;
  spec.base_dynamics = cfg.resolved_dynamics(spec.graph.size(), 0.0);
  spec.base_integrator = cfg.integrator;
  spec.lock = cfg.lock;

  const auto rows = oim::run_sweep(spec, g.threads);
  std::ostringstream os;
  oim::write_sweep_csv(os, spec.parameter, rows);
  emit(out_path, os.str());
  if (!out_path.empty() && out_path != "-") {
    oim::write_file_atomic(out_path + ".config.json", oim::to_json(cfg).dump(2) + "\n");
  }
  if (!g.quiet) std::cerr << "sweep: " << rows.size() << " rows\n";
  return kExitOk;
}

int run_compare(const GlobalFlags& g, const DynamicsFlags& flags, const std::string& out_path) {
  oim::RunConfig cfg = base_config(g);
  flags.apply(cfg);
  const auto graph = cfg.instance.load();
  const auto dyn = cfg.resolved_dynamics(graph.size(), 0.0);
  const auto summary =
      oim::compare_modes(graph, dyn, cfg.integrator, cfg.lock, cfg.seeds(), g.threads);
  auto doc = oim::to_json(summary);
  doc["config"] = oim::to_json(cfg);
  emit(out_path, doc.dump(2) + "\n");
  if (!g.quiet) {
    std::cerr << "compare: " << summary.n_locked_pairs << " locked pairs of " << summary.n_seeds
              << '\n';
  }
  return kExitOk;
}

int run_gen(const GlobalFlags& g, std::size_t n, double density, const std::string& weights,
            const std::string& out_path) {
  const auto graph = oim::random_instance(n, density, oim::parse_weight_set(weights), g.seed);
  emit(out_path, oim::serialize_graph(graph));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-domain oscillator Ising machine: max-cut solving and injection-locking "
               "experiments"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GlobalFlags g;
  app.add_option("--config", g.config_path, "JSON run configuration");
  g.seed_opt = app.add_option("--seed", g.seed, "Base seed")->default_val(0);
  app.add_option("--threads", g.threads, "Worker threads (0 = auto)")->default_val(0);
  app.add_flag("--quiet", g.quiet, "Suppress progress messages on stderr");

  auto* solve = app.add_subcommand("solve", "Solve a max-cut instance with the oscillator model");
  solve->fallthrough();
  std::string solve_graph, trajectory_out, metrics_out;
  std::size_t attempts = oim::RunConfig{}.attempts;
  solve->add_option("graph", solve_graph, "Edge-list graph file")->required();
  auto* attempts_opt = solve->add_option("--attempts", attempts, "Seeded attempts")
                           ->default_val(attempts)
                           ->check(CLI::PositiveNumber);
  DynamicsFlags solve_flags;
  solve_flags.add(solve, true, oim::RunConfig::kSolveNoise);
  solve->add_option("--trajectory", trajectory_out, "Write the best attempt's phases as CSV");
  solve->add_option("--metrics", metrics_out, "Write the best attempt's R/error/energy as CSV");

  auto* oracle = app.add_subcommand("oracle", "Exact max cut by exhaustive enumeration (n <= 24)");
  oracle->fallthrough();
  std::string oracle_graph;
  oracle->add_option("graph", oracle_graph, "Edge-list graph file")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep sigma or kappa_s over seeds and modes");
  sweep->fallthrough();
  std::string sweep_out;
  sweep->add_option("--out", sweep_out, "Output CSV path ('-' for stdout)")->default_val("-");
  DynamicsFlags sweep_flags;
  sweep_flags.add(sweep, false, 0.0);

  auto* compare = app.add_subcommand("compare", "Paired distributed vs centralized injection runs");
  compare->fallthrough();
  std::string compare_out;
  compare->add_option("--out", compare_out, "Output JSON path ('-' for stdout)")->default_val("-");
  DynamicsFlags compare_flags;
  compare_flags.add(compare, false, 0.0);

  auto* gen = app.add_subcommand("gen", "Generate a random max-cut instance (uses --seed)");
  gen->fallthrough();
  std::size_t gen_n = 10;
  double gen_density = 1.0;
  std::string gen_weights = "pm1", gen_out;
  gen->add_option("--n", gen_n, "Vertex count")->default_val(gen_n)->check(CLI::Range(2, 1 << 24));
  gen->add_option("--density", gen_density, "Edge probability in (0, 1]")
      ->default_val(gen_density)
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--weights", gen_weights, "pm1 | uniform")
      ->default_val(gen_weights)
      ->check(CLI::IsMember({"pm1", "uniform"}));
  gen->add_option("--out", gen_out, "Output path ('-' for stdout)")->default_val("-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) {
      return run_solve(g, solve_graph, attempts, attempts_opt->count() > 0, solve_flags,
                       trajectory_out, metrics_out);
    }
    if (*oracle) return run_oracle(oracle_graph);
    if (*sweep) return run_sweep(g, sweep_flags, sweep_out);
    if (*compare) return run_compare(g, compare_flags, compare_out);
    if (*gen) return run_gen(g, gen_n, gen_density, gen_weights, gen_out);
  } catch (const oim::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const oim::DivergenceError& e) {
    std::cerr << "error: every attempt diverged (" << e.what() << ")\n";
    return kExitSolver;
  } catch (const oim::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const oim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const oim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

#include "oim/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "oim/error.hpp"
#include "oim/io.hpp"
#include "oim/parallel.hpp"

namespace oim {

std::string to_string(SweepParameter p) {
  return p == SweepParameter::Sigma ? "sigma" : "kappa_s";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "sigma") return SweepParameter::Sigma;
  if (name == "kappa_s") return SweepParameter::KappaS;
  throw ParameterError("unknown sweep parameter '" + name + "' (expected sigma or kappa_s)");
}

MaxCutInstance reference_instance(std::uint64_t seed) {
  return random_instance(kReferenceSize, 1.0, WeightSet::PlusMinusOne, seed);
}

std::uint64_t state_hash(std::span<const double> phases) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double p : phases) {
    auto bits = std::bit_cast<std::uint64_t>(p);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

RunOutcome run_seeded(const MaxCutInstance& graph, const IsingInstance& inst,
                      const DynamicsConfig& dyn, IntegratorConfig icfg,
                      const LockCriteria& lock, std::uint64_t seed) {
  RunOutcome out;
  const PhaseState init = initial_phases(inst.size(), seed);
  out.initial_hash = state_hash(init.phases);
  icfg.seed = seed;

  std::optional<Trajectory> traj;
  try {
    traj.emplace(integrate(inst, dyn, icfg, init));
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.divergence_step = e.step();
    return out;
  }

  std::vector<double> order(traj->sample_count());
  double best_cut = -INFINITY;
  for (std::size_t k = 0; k < traj->sample_count(); ++k) {
    const auto row = traj->row(k);
    order[k] = order_parameter(row);
    const auto spins = binarize(row, readout_reference(dyn, row));
    best_cut = std::max(best_cut, cut_value(graph, spins));
  }
  const auto report = lock_time(order, traj->times(), lock);
  const auto last = traj->row(traj->sample_count() - 1);

  out.lock_time = report.lock_time;
  out.final_R = order.back();
  out.final_error = inst.size() >= 2 ? phase_lock_error(last) : 0.0;
  out.final_score = score_state(last, inst, graph, dyn);
  out.best_cut = best_cut;
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ParameterError("sweep needs at least one parameter value");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < 0.0) {
      throw ParameterError("sweep values must be finite and >= 0");
    }
    if (k > 0 && !(values[k] > values[k - 1])) {
      throw ParameterError("sweep values must be strictly increasing");
    }
  }
  if (seeds.empty()) throw ParameterError("sweep needs at least one seed");
  if (modes.empty()) throw ParameterError("sweep needs at least one mode");
  base_integrator.validate();
  lock.validate();
}

namespace {

DynamicsConfig with_parameter(DynamicsConfig dyn, SweepParameter p, double value) {
  (p == SweepParameter::Sigma ? dyn.sigma : dyn.kappa_s) = value;
  return dyn;
}

std::size_t recorded_samples(const IntegratorConfig& icfg) {
  const std::size_t steps = icfg.step_count();
  return steps / icfg.record_every + 1 + (steps % icfg.record_every != 0 ? 1 : 0);
}

void require_hold_fits(const IntegratorConfig& icfg, const LockCriteria& lock) {
  if (lock.hold_samples > recorded_samples(icfg)) {
    throw ParameterError("hold window of " + std::to_string(lock.hold_samples) +
                         " samples exceeds the " + std::to_string(recorded_samples(icfg)) +
                         " recorded samples");
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t threads) {
  spec.validate();
  require_hold_fits(spec.base_integrator, spec.lock);
  const IsingInstance inst = ising_from_maxcut(spec.graph);
  for (auto mode : spec.modes) {
    auto dyn = spec.base_dynamics;
    dyn.mode = mode;
    dyn.validate(inst.size());
  }

  const std::size_t n_seeds = spec.seeds.size();
  const std::size_t n_modes = spec.modes.size();
  std::vector<SweepRow> rows(spec.values.size() * n_seeds * n_modes);

  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t m = idx % n_modes;
    const std::size_t s = (idx / n_modes) % n_seeds;
    const std::size_t v = idx / (n_modes * n_seeds);

    DynamicsConfig dyn = with_parameter(spec.base_dynamics, spec.parameter, spec.values[v]);
    dyn.mode = spec.modes[m];
    const auto run = run_seeded(spec.graph, inst, dyn, spec.base_integrator, spec.lock,
                                spec.seeds[s]);

    SweepRow& row = rows[idx];
    row.parameter_value = spec.values[v];
    row.seed = spec.seeds[s];
    row.mode = spec.modes[m];
    row.diverged = run.diverged;
    row.initial_hash = run.initial_hash;
    if (!run.diverged) {
      row.lock_time = run.lock_time;
      row.final_R = run.final_R;
      row.final_error = run.final_error;
      row.final_energy = run.final_score->energy;
      row.best_cut = run.best_cut;
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepParameter parameter,
                     const std::vector<SweepRow>& rows) {
  out << "param,value,seed,mode,lock_time,final_R,final_error,final_energy,best_cut\n";
  const std::string name = to_string(parameter);
  for (const auto& r : rows) {
    out << name << ',' << format_shortest(r.parameter_value) << ',' << r.seed << ','
        << to_string(r.mode) << ',';
    if (r.diverged) {
      out << ",,,,\n";
      continue;
    }
    if (r.lock_time) out << format_significant(*r.lock_time);
    out << ',' << format_significant(r.final_R) << ',' << format_significant(r.final_error)
        << ',' << format_significant(r.final_energy) << ',' << format_significant(r.best_cut)
        << '\n';
  }
}

ComparisonSummary compare_modes(const MaxCutInstance& graph, const DynamicsConfig& dyn,
                                const IntegratorConfig& icfg, const LockCriteria& lock,
                                const std::vector<std::uint64_t>& seeds,
                                std::size_t threads) {
  if (seeds.size() < kMinComparisonSeeds) {
    throw ParameterError("mode comparison needs at least " +
                         std::to_string(kMinComparisonSeeds) + " seeds");
  }
  icfg.validate();
  lock.validate();
  require_hold_fits(icfg, lock);
  const IsingInstance inst = ising_from_maxcut(graph);

  DynamicsConfig distributed = dyn;
  distributed.mode = DynamicsMode::Distributed;
  DynamicsConfig centralized = dyn;
  centralized.mode = DynamicsMode::Centralized;
  distributed.validate(inst.size());
  centralized.validate(inst.size());

  ComparisonSummary summary;
  summary.n_seeds = seeds.size();
  summary.pairs.resize(seeds.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) summary.pairs[s].seed = seeds[s];
  parallel_for(seeds.size() * 2, threads, [&](std::size_t idx) {
    const std::size_t s = idx / 2;
    auto& pair = summary.pairs[s];
    if (idx % 2 == 0) {
      pair.distributed = run_seeded(graph, inst, distributed, icfg, lock, seeds[s]);
    } else {
      pair.centralized = run_seeded(graph, inst, centralized, icfg, lock, seeds[s]);
    }
  });

  std::vector<double> lock_d, lock_c, err_d, err_c;
  std::size_t wins = 0;
  for (const auto& p : summary.pairs) {
    if (p.distributed.initial_hash != p.centralized.initial_hash) {
      throw ContractError("paired runs for seed " + std::to_string(p.seed) +
                          " started from different states");
    }
    if (!p.distributed.diverged) err_d.push_back(p.distributed.final_error);
    if (!p.centralized.diverged) err_c.push_back(p.centralized.final_error);
    if (p.distributed.lock_time) lock_d.push_back(*p.distributed.lock_time);
    if (p.centralized.lock_time) lock_c.push_back(*p.centralized.lock_time);
    if (p.distributed.lock_time && p.centralized.lock_time) {
      ++summary.n_locked_pairs;
      if (*p.distributed.lock_time < *p.centralized.lock_time) ++wins;
    }
  }

  summary.n_locked_distributed = lock_d.size();
  summary.n_locked_centralized = lock_c.size();
  summary.distributed_locking = 2 * lock_d.size() >= seeds.size();
  summary.centralized_locking = 2 * lock_c.size() >= seeds.size();
  if (summary.distributed_locking) summary.median_lock_distributed = median(lock_d);
  if (summary.centralized_locking) summary.median_lock_centralized = median(lock_c);
  if (summary.median_lock_distributed && summary.median_lock_centralized &&
      *summary.median_lock_distributed > 0.0) {
    summary.speedup = *summary.median_lock_centralized / *summary.median_lock_distributed;
  }
  if (summary.n_locked_pairs > 0) {
    summary.win_fraction =
        static_cast<double>(wins) / static_cast<double>(summary.n_locked_pairs);
  }
  if (!err_d.empty()) summary.median_error_distributed = median(err_d);
  if (!err_c.empty()) summary.median_error_centralized = median(err_c);
  return summary;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json run_json(const RunOutcome& r) {
  return {{"lock_time", opt(r.lock_time)},
          {"final_R", r.diverged ? nlohmann::json(nullptr) : nlohmann::json(r.final_R)},
          {"final_error", r.diverged ? nlohmann::json(nullptr) : nlohmann::json(r.final_error)},
          {"diverged", r.diverged}};
}

}  // namespace

nlohmann::json to_json(const ComparisonSummary& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : s.pairs) {
    pairs.push_back({{"seed", p.seed},
                     {"distributed", run_json(p.distributed)},
                     {"centralized", run_json(p.centralized)}});
  }
  return {{"median_lock_distributed", opt(s.median_lock_distributed)},
          {"median_lock_centralized", opt(s.median_lock_centralized)},
          {"speedup", opt(s.speedup)},
          {"win_fraction", opt(s.win_fraction)},
          {"median_error_distributed", opt(s.median_error_distributed)},
          {"median_error_centralized", opt(s.median_error_centralized)},
          {"n_seeds", s.n_seeds},
          {"n_locked_pairs", s.n_locked_pairs},
          {"n_locked_distributed", s.n_locked_distributed},
          {"n_locked_centralized", s.n_locked_centralized},
          {"distributed_locking", s.distributed_locking},
          {"centralized_locking", s.centralized_locking},
          {"pairs", std::move(pairs)}};
}

SolveResult solve(const MaxCutInstance& graph, std::size_t attempts,
                  const DynamicsConfig& dyn, const IntegratorConfig& icfg,
                  const LockCriteria& lock, std::uint64_t base_seed, std::size_t threads) {
  if (attempts == 0) throw ParameterError("solve needs at least one attempt");
  icfg.validate();
  lock.validate();
  require_hold_fits(icfg, lock);
  const IsingInstance inst = ising_from_maxcut(graph);
  dyn.validate(inst.size());

  std::vector<RunOutcome> runs(attempts);
  parallel_for(attempts, threads, [&](std::size_t k) {
    runs[k] = run_seeded(graph, inst, dyn, icfg, lock, base_seed + k);
  });

  std::optional<std::size_t> best;
  SolveResult result{Score{SpinAssignment(std::vector<int>(graph.size(), 1)), 0.0, 0.0}};
  result.attempts = attempts;
  for (std::size_t k = 0; k < attempts; ++k) {
    const auto& r = runs[k];
    if (r.diverged) {
      ++result.diverged;
      continue;
    }
    if (r.lock_time) ++result.locked;
    // Strict comparison keeps the lowest seed among equal cuts.
    if (!best || r.final_score->cut > runs[*best].final_score->cut) best = k;
  }
  if (!best) throw DivergenceError(runs.front().divergence_step);

  result.best = *runs[*best].final_score;
  result.best_seed = base_seed + *best;
  result.lock_fraction = static_cast<double>(result.locked) / static_cast<double>(attempts);
  return result;
}

}  // namespace oim

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "oim/error.hpp"
#include "oim/experiments.hpp"
#include "oim/parallel.hpp"

using namespace oim;

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t k = 0; k < count; ++k) s[k] = first + k;
  return s;
}

IntegratorConfig short_run(double t_end = 10.0) {
  IntegratorConfig c;
  c.t_end = t_end;
  return c;
}

std::string csv(const std::vector<SweepRow>& rows, SweepParameter p) {
  std::ostringstream out;
  write_sweep_csv(out, p, rows);
  return out.str();
}

const MaxCutInstance kTriangle(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});

}  // namespace

TEST_CASE("reference instance") {
  const auto g = reference_instance();
  CHECK(g.size() == 10);
  CHECK(g.edges().size() == 45);
  for (const auto& e : g.edges()) CHECK(std::abs(e.weight) == 1.0);
  CHECK(reference_instance() == g);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(median({7.0}) == 7.0);
  CHECK_THROWS_AS(median({}), ParameterError);
}

TEST_CASE("parallel_for covers every index and reports the lowest failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 37 || i == 80) throw ParameterError("index " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()) == "index 37");
  }
  CHECK(resolve_threads(0) >= 1);
  CHECK(resolve_threads(3) == 3);
}

TEST_CASE("sweep cardinality and ordering") {
  SweepSpec spec;
  spec.values = {0.01, 0.1, 0.5, 1.0, 2.0};
  spec.seeds = seed_range(0, 5);
  spec.base_integrator = short_run(3.0);
  spec.lock.hold_samples = 10;
  const auto rows = run_sweep(spec, 4);
  REQUIRE(rows.size() == 50);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].parameter_value == spec.values[k / 10]);
    CHECK(rows[k].seed == (k / 2) % 5);
    CHECK(rows[k].mode == (k % 2 ? DynamicsMode::Centralized : DynamicsMode::Distributed));
    CHECK(rows[k].final_R >= 0.0);
    CHECK(rows[k].final_R <= 1.0);
    if (k % 2) CHECK(rows[k].initial_hash == rows[k - 1].initial_hash);
  }
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec;
  spec.seeds = {1};
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
  spec.values = {1.0, 0.5};
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
  spec.values = {-1.0};
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
  spec.values = {1.0};
  spec.seeds = {};
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
  spec.seeds = {1};
  spec.base_integrator = short_run(1.0);  // 21 samples
  spec.lock.hold_samples = 50;
  CHECK_THROWS_AS(run_sweep(spec), ParameterError);
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepSpec spec;
  spec.parameter = SweepParameter::KappaS;
  spec.values = {0.5, 1.0, 2.0};
  spec.seeds = seed_range(10, 4);
  spec.base_integrator = short_run(5.0);
  spec.base_dynamics.noise_amplitude = 0.02;
  spec.lock.hold_samples = 10;
  const auto a = csv(run_sweep(spec, 1), spec.parameter);
  CHECK(a == csv(run_sweep(spec, 3), spec.parameter));
  CHECK(a == csv(run_sweep(spec, 8), spec.parameter));
  CHECK(a.rfind("param,value,seed,mode,lock_time,final_R,final_error,final_energy,best_cut\n", 0) ==
        0);
  CHECK(a.find("\nkappa_s,0.5,10,distributed,") != std::string::npos);
}

TEST_CASE("sweep CSV leaves absent values empty") {
  SweepRow locked;
  locked.parameter_value = 0.25;
  locked.seed = 3;
  locked.lock_time = 1.5;
  locked.final_R = 1.0;
  SweepRow unlocked = locked;
  unlocked.lock_time.reset();
  unlocked.mode = DynamicsMode::Centralized;
  SweepRow diverged = locked;
  diverged.diverged = true;
  CHECK(csv({locked, unlocked, diverged}, SweepParameter::Sigma) ==
        "param,value,seed,mode,lock_time,final_R,final_error,final_energy,best_cut\n"
        "sigma,0.25,3,distributed,1.5,1,0,0,0\n"
        "sigma,0.25,3,centralized,,1,0,0,0\n"
        "sigma,0.25,3,distributed,,,,,\n");
}

TEST_CASE("uncoupled, non-injecting oscillators stay at the random-phase baseline") {
  // Monte-Carlo estimate of E[R] for 10 uniform phases, independent of the simulator.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  double mc = 0.0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    double c = 0.0, s = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double a = 2 * u(rng);
      c += std::cos(a);
      s += std::sin(a);
    }
    mc += std::hypot(c, s) / 10.0;
  }
  mc /= trials;
  CHECK(mc == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(0.15));

  SweepSpec spec;
  spec.values = {0.0};
  spec.seeds = seed_range(0, 40);
  spec.base_dynamics.variant = InjectionVariant::PhaseIndependent;
  spec.base_integrator = short_run(5.0);
  spec.modes = {DynamicsMode::Distributed};
  spec.lock.hold_samples = 10;
  const auto rows = run_sweep(spec, 4);
  double mean = 0.0, sq = 0.0;
  for (const auto& r : rows) {
    mean += r.final_R;
    sq += r.final_R * r.final_R;
  }
  const double n = static_cast<double>(rows.size());
  mean /= n;
  const double se = std::sqrt((sq / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - mc) < 3 * se);
}

TEST_CASE("run_seeded is deterministic and pairs on the initial state") {
  const auto g = reference_instance();
  const auto inst = ising_from_maxcut(g);
  DynamicsConfig dyn;
  const auto a = run_seeded(g, inst, dyn, short_run(), LockCriteria{}, 5);
  const auto b = run_seeded(g, inst, dyn, short_run(), LockCriteria{}, 5);
  CHECK(a.final_R == b.final_R);
  CHECK(a.lock_time == b.lock_time);
  CHECK(a.initial_hash == state_hash(initial_phases(10, 5).phases));
  CHECK(a.initial_hash != state_hash(initial_phases(10, 6).phases));
  REQUIRE(a.final_score);
  CHECK(a.best_cut >= a.final_score->cut);
  CHECK_FALSE(a.diverged);
}

TEST_CASE("zero injection strength makes both modes identical") {
  // negative max-cut weights are ferromagnetic couplings
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j < 10; ++j) edges.push_back({i, j, -1.0});
  }
  const MaxCutInstance ferro(10, edges);
  DynamicsConfig dyn;
  dyn.kappa_s = 0.0;
  dyn.variant = InjectionVariant::Adler;
  const auto summary = compare_modes(ferro, dyn, short_run(20.0), LockCriteria{}, seed_range(0, 10), 4);
  REQUIRE(summary.speedup);
  CHECK(*summary.speedup == 1.0);
  CHECK(summary.n_locked_pairs == 10);
  CHECK(*summary.win_fraction == 0.0);
  for (const auto& p : summary.pairs) {
    CHECK(p.distributed.lock_time == p.centralized.lock_time);
    CHECK(p.distributed.initial_hash == p.centralized.initial_hash);
  }
}

TEST_CASE("comparison summary bookkeeping") {
  DynamicsConfig dyn;
  dyn.variant = InjectionVariant::Adler;
  const auto seeds = seed_range(100, 12);
  const auto s = compare_modes(reference_instance(), dyn, short_run(20.0), LockCriteria{}, seeds, 4);
  CHECK(s.n_seeds == 12);
  REQUIRE(s.pairs.size() == 12);
  std::size_t pairs = 0, wins = 0, ld = 0, lc = 0;
  for (std::size_t k = 0; k < 12; ++k) {
    const auto& p = s.pairs[k];
    CHECK(p.seed == seeds[k]);
    ld += p.distributed.lock_time.has_value();
    lc += p.centralized.lock_time.has_value();
    if (p.distributed.lock_time && p.centralized.lock_time) {
      ++pairs;
      wins += *p.distributed.lock_time < *p.centralized.lock_time;
    }
  }
  CHECK(s.n_locked_pairs == pairs);
  CHECK(s.n_locked_distributed == ld);
  CHECK(s.n_locked_centralized == lc);
  CHECK(s.distributed_locking == (2 * ld >= 12));
  CHECK(s.centralized_locking == (2 * lc >= 12));
  CHECK(s.median_lock_distributed.has_value() == s.distributed_locking);
  CHECK(s.median_lock_centralized.has_value() == s.centralized_locking);
  if (pairs > 0) {
    CHECK(*s.win_fraction == doctest::Approx(static_cast<double>(wins) / static_cast<double>(pairs)));
  } else {
    CHECK_FALSE(s.win_fraction.has_value());
  }

  const auto j = to_json(s);
  for (const char* key : {"median_lock_distributed", "median_lock_centralized", "speedup",
                          "win_fraction", "median_error_distributed", "median_error_centralized",
                          "n_seeds", "n_locked_pairs"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["n_seeds"] == 12);

  CHECK(to_json(compare_modes(reference_instance(), dyn, short_run(20.0), LockCriteria{}, seeds, 1))
            .dump() == j.dump());
  CHECK_THROWS_AS(compare_modes(reference_instance(), dyn, short_run(), LockCriteria{},
                                seed_range(0, 9)),
                  ParameterError);
}

TEST_CASE("solve reaches brute-force optima on small graphs") {
  DynamicsConfig dyn;
  dyn.noise_amplitude = 0.01;
  const auto icfg = short_run(20.0);

  const MaxCutInstance edge(2, {{0, 1, 1.0}});
  CHECK(solve(edge, 5, dyn, icfg, LockCriteria{}, 0).best.cut == 1.0);

  const auto tri = solve(kTriangle, 20, dyn, icfg, LockCriteria{}, 0, 4);
  CHECK(tri.best.cut == 2.0);
  CHECK(tri.attempts == 20);
  CHECK(tri.lock_fraction >= 0.0);
  CHECK(tri.lock_fraction <= 1.0);
  CHECK(tri.best_seed < 20);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_instance(7, 0.6, WeightSet::Uniform, seed);
    const double one = solve(g, 1, dyn, icfg, LockCriteria{}, 0).best.cut;
    const double twenty = solve(g, 20, dyn, icfg, LockCriteria{}, 0, 4).best.cut;
    CHECK(twenty >= one);
  }
  CHECK_THROWS_AS(solve(kTriangle, 0, dyn, icfg, LockCriteria{}, 0), ParameterError);
}

TEST_CASE("solve is deterministic and thread independent") {
  DynamicsConfig dyn;
  dyn.noise_amplitude = 0.01;
  const auto g = random_instance(8, 0.7, WeightSet::Uniform, 3);
  const auto a = solve(g, 12, dyn, short_run(10.0), LockCriteria{}, 40, 1);
  const auto b = solve(g, 12, dyn, short_run(10.0), LockCriteria{}, 40, 6);
  CHECK(a.best_seed == b.best_seed);
  CHECK(a.best.cut == b.best.cut);
  CHECK(a.locked == b.locked);
}

TEST_CASE("solve reports divergence only when every attempt diverges") {
  DynamicsConfig dyn;
  dyn.sigma = std::numeric_limits<double>::max();
  dyn.noise_amplitude = 0.0;
  const auto g = random_instance(6, 1.0, WeightSet::PlusMinusOne, 1);
  IntegratorConfig icfg = short_run(1.0);
  icfg.dt = 0.1;
  LockCriteria lock;
  lock.hold_samples = 1;
  CHECK_THROWS_AS(solve(g, 3, dyn, icfg, lock, 0), DivergenceError);

  SweepSpec spec;
  spec.graph = g;
  spec.values = {std::numeric_limits<double>::max()};
  spec.seeds = {0};
  spec.base_integrator = icfg;
  spec.lock = lock;
  const auto rows = run_sweep(spec);
  for (const auto& r : rows) CHECK(r.diverged);
}

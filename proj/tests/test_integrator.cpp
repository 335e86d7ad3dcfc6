#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oim/dynamics.hpp"
#include "oim/error.hpp"
#include "oim/integrator.hpp"

using namespace oim;
using std::numbers::pi;

namespace {

IntegratorConfig icfg(double dt, double t_end, std::size_t every = 1) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = every;
  return c;
}

DynamicsConfig coupled(double sigma = 1.0) {
  DynamicsConfig c;
  c.mode = DynamicsMode::CoupledOnly;
  c.sigma = sigma;
  return c;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("integrator config validation") {
  CHECK_NOTHROW(IntegratorConfig{}.validate());
  CHECK_THROWS_AS(icfg(0.0, 1.0).validate(), ParameterError);
  CHECK_THROWS_AS(icfg(1.0, 1.0).validate(), ParameterError);
  CHECK_THROWS_AS(icfg(0.1, -1.0).validate(), ParameterError);
  CHECK_THROWS_AS(icfg(1e-9, 1.0).validate(), ParameterError);
  CHECK_THROWS_AS(icfg(0.1, 1.0, 0).validate(), ParameterError);
  CHECK(icfg(0.01, 1.0).step_count() == 100);
}

TEST_CASE("initial phases") {
  const auto a = initial_phases(16, 42);
  CHECK(a.phases == initial_phases(16, 42).phases);
  CHECK(a.phases != initial_phases(16, 43).phases);
  CHECK(a.time == 0.0);

  const auto one = initial_phases(1, 7);
  REQUIRE(one.phases.size() == 1);
  CHECK(one.phases[0] >= 0.0);
  CHECK(one.phases[0] < 2 * pi);

  const auto big = initial_phases(1000, 3);
  double c = 0.0;
  for (double p : big.phases) {
    CHECK(p >= 0.0);
    CHECK(p < 2 * pi);
    c += std::cos(p);
  }
  CHECK(std::abs(c / 1000.0) < 0.1);
  CHECK_THROWS_AS(initial_phases(0, 1), ParameterError);
}

TEST_CASE("constant drift is integrated exactly") {
  DynamicsConfig c;
  c.mode = DynamicsMode::Free;
  c.natural_freqs = {1.0};
  const IsingInstance inst(1, {});
  const PhaseState init{{0.4}, 0.0};
  const auto traj = integrate(inst, c, icfg(0.01, 1.0), init);
  const auto last = traj.final_state();
  CHECK(last.time == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(last.phases[0] - (0.4 + 1.0)) < 1e-12);
}

TEST_CASE("two coupled oscillators follow the closed-form solution") {
  const IsingInstance inst(2, {{0, 1, 1.0}});
  const double sigma = 1.0;
  const double d0 = -1.0;
  const auto traj = integrate(inst, coupled(sigma), icfg(0.01, 20.0, 10), PhaseState{{0.0, 1.0}, 0.0});
  for (std::size_t k = 0; k < traj.sample_count(); ++k) {
    const double t = traj.times()[k];
    const auto r = traj.row(k);
    const double exact = 2.0 * std::atan(std::tan(d0 / 2.0) * std::exp(-2.0 * sigma * t));
    REQUIRE(std::abs((r[0] - r[1]) - exact) < 1e-8);
  }
  const auto last = traj.final_state();
  CHECK(std::abs(last.phases[0] - last.phases[1]) < 1e-3);
  // the mean phase is conserved
  CHECK(last.phases[0] + last.phases[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("RK4 converges at fourth order") {
  const auto inst = ising_from_maxcut(random_instance(5, 1.0, WeightSet::Uniform, 17));
  DynamicsConfig c;
  c.mode = DynamicsMode::Distributed;
  c.variant = InjectionVariant::SubHarmonic;
  c.sigma = 1.0;
  c.kappa_s = 1.0;
  const auto init = initial_phases(5, 17);
  const double dt = 0.1, t_end = 2.0;
  const auto end = [&](double h) {
    return integrate(inst, c, icfg(h, t_end, 1000000), init).final_state().phases;
  };
  const auto ref = end(dt / 8);
  const double e1 = max_abs_diff(end(dt), ref);
  const double e2 = max_abs_diff(end(dt / 2), ref);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("trajectory sampling") {
  const IsingInstance inst(3, {{0, 1, 1.0}});
  const auto init = initial_phases(3, 1);
  SUBCASE("even spacing") {
    const auto traj = integrate(inst, coupled(), icfg(0.01, 1.0, 5), init);
    CHECK(traj.sample_count() == 21);
    CHECK(traj.times()[0] == 0.0);
    for (std::size_t k = 1; k < traj.sample_count(); ++k) {
      CHECK(traj.times()[k] - traj.times()[k - 1] == doctest::Approx(0.05));
    }
    CHECK(traj.state(0).phases == init.phases);
  }
  SUBCASE("last step is always recorded") {
    const auto traj = integrate(inst, coupled(), icfg(0.01, 1.0, 30), init);
    CHECK(traj.sample_count() == 5);  // 0, 30, 60, 90, 100
    CHECK(traj.times().back() == doctest::Approx(1.0));
    for (std::size_t k = 1; k < traj.sample_count(); ++k) {
      CHECK(traj.times()[k] > traj.times()[k - 1]);
    }
  }
}

TEST_CASE("integration is bit-reproducible") {
  const auto inst = ising_from_maxcut(random_instance(8, 0.6, WeightSet::PlusMinusOne, 4));
  DynamicsConfig c;
  c.noise_amplitude = 0.05;
  auto cfg = icfg(0.01, 5.0, 7);
  cfg.seed = 99;
  const auto a = integrate(inst, c, cfg, initial_phases(8, 5));
  const auto b = integrate(inst, c, cfg, initial_phases(8, 5));
  std::ostringstream sa, sb;
  write_trajectory_csv(sa, a);
  write_trajectory_csv(sb, b);
  CHECK(sa.str() == sb.str());

  cfg.seed = 100;
  const auto other = integrate(inst, c, cfg, initial_phases(8, 5));
  CHECK(max_abs_diff(other.final_state().phases, a.final_state().phases) > 0.0);
}

TEST_CASE("noise increments have the documented scale") {
  // Zero field: each step adds N(0, noise^2 dt); after m steps the variance is noise^2 t.
  const PhaseField zero = [](std::span<const double>, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  auto cfg = icfg(0.01, 4.0, 400);
  cfg.seed = 11;
  const auto traj = integrate_field(zero, cfg, PhaseState{std::vector<double>(2000, 0.0), 0.0}, 0.5);
  double var = 0.0;
  for (double p : traj.final_state().phases) var += p * p;
  var /= 2000.0;
  CHECK(var == doctest::Approx(0.25 * 4.0).epsilon(0.1));
}

TEST_CASE("noiseless sub-harmonic runs descend the potential") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = ising_from_maxcut(random_instance(10, 1.0, WeightSet::PlusMinusOne, seed));
    DynamicsConfig c;
    const auto traj = integrate(inst, c, icfg(0.01, 10.0, 5), initial_phases(10, seed));
    double prev = potential_energy(inst, c, traj.state(0));
    for (std::size_t k = 1; k < traj.sample_count(); ++k) {
      const double e = potential_energy(inst, c, traj.state(k));
      REQUIRE(e <= prev + 1e-9);
      prev = e;
    }
  }
}

TEST_CASE("coupled-only dynamics are equivariant under a global shift") {
  const auto inst = ising_from_maxcut(random_instance(7, 0.8, WeightSet::Uniform, 8));
  const auto init = initial_phases(7, 8);
  const auto base = integrate(inst, coupled(1.5), icfg(0.01, 5.0, 10), init);
  for (double shift : {0.3, -2.0, 7.5}) {
    auto moved = init;
    for (auto& p : moved.phases) p += shift;
    const auto traj = integrate(inst, coupled(1.5), icfg(0.01, 5.0, 10), moved);
    REQUIRE(traj.sample_count() == base.sample_count());
    for (std::size_t k = 0; k < traj.sample_count(); ++k) {
      const auto a = base.row(k);
      const auto b = traj.row(k);
      for (std::size_t i = 0; i < 7; ++i) REQUIRE(std::abs(b[i] - a[i] - shift) < 1e-9);
    }
  }
}

TEST_CASE("non-finite values surface as divergence") {
  SUBCASE("field returns NaN at a given step") {
    const PhaseField field = [](std::span<const double>, double t, std::span<double> out) {
      std::fill(out.begin(), out.end(), t > 0.245 ? NAN : 1.0);
    };
    try {
      integrate_field(field, icfg(0.01, 1.0), PhaseState{{0.0, 0.0}, 0.0}, 0.0);
      FAIL("expected divergence");
    } catch (const DivergenceError& e) {
      CHECK(e.step() == 25);  // RK4 stages of step 25 reach t = 0.25
    }
  }
  SUBCASE("non-finite initial state") {
    const IsingInstance inst(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(integrate(inst, coupled(), icfg(0.01, 1.0), PhaseState{{0.0, INFINITY}, 0.0}),
                    DivergenceError);
  }
  SUBCASE("state mismatch") {
    const IsingInstance inst(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(integrate(inst, coupled(), icfg(0.01, 1.0), PhaseState{{0.0}, 0.0}),
                    DimensionError);
  }
}

TEST_CASE("trajectory CSV") {
  Trajectory traj(2);
  traj.append(0.0, std::vector<double>{0.1, -2.0});
  traj.append(0.5, std::vector<double>{1.0 / 3.0, 4.0});
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  CHECK(out.str() == "t,theta_0,theta_1\n0,0.10000000000000001,-2\n0.5,0.33333333333333331,4\n");
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rdpp/error.hpp"
#include "rdpp/stepper.hpp"

using namespace rdpp;

namespace {

State smooth_data(const Grid& g, std::uint64_t seed) {
  InitSpec spec;
  spec.kind = InitKind::random_fourier;
  spec.amplitude = {0.8, 0.6, 0.7};
  spec.modes = 3;
  spec.seed = seed;
  return initial_data(spec, g);
}

State run_to(const StepPlan& plan, const State& s0) {
  Observers obs;
  obs.snapshot_times = {plan.horizon};
  return integrate(plan, s0, obs).snapshots.states.back();
}

}  // namespace

TEST_CASE("constant equilibria are stationary") {
  const Grid g{1, 32, 4.0};
  for (double h : {0.1, 0.5, 2.0}) {
    const Params p = Params::e1(h);
    for (const Vec3& y : {Vec3{0.5, 0.5, 0.5}, Vec3{1, 0, 0}, Vec3{0, 0, 0}}) {
      const State s = run_to(StepPlan{p, g, 0.05, 10.0}, State::constant(g, y));
      CHECK(sup_distance(s, y) <= 1e-12);
    }
  }
}

TEST_CASE("nonnegativity and no clamping beyond round-off") {
  for (int dim : {1, 2}) {
    const Grid g{dim, dim == 1 ? 128 : 24, 16.0};
    InitSpec spec;
    spec.seed = 4;
    spec.box = {{0, 0, 0}, {1.5, 1.5, 1.5}};
    Observers obs;
    obs.sample_every = 5;
    const Observation o = integrate(StepPlan{Params::e2(0.3), g, 0.02, 5.0}, initial_data(spec, g), obs);
    for (const auto& s : o.samples) {
      for (double x : s.inf) CHECK(x >= -1e-12);
    }
    CHECK(o.max_clamp <= 1e-12);
  }
}

TEST_CASE("second-order convergence in dt") {
  const Grid g{1, 64, 8.0};
  const Params p = Params::e2(0.4);
  const State s0 = smooth_data(g, 2);
  const State ref = run_to(StepPlan{p, g, 0.00125, 1.0}, s0);
  const double e1 = sup_distance(run_to(StepPlan{p, g, 0.02, 1.0}, s0), ref);
  const double e2 = sup_distance(run_to(StepPlan{p, g, 0.01, 1.0}, s0), ref);
  const double e3 = sup_distance(run_to(StepPlan{p, g, 0.005, 1.0}, s0), ref);
  MESSAGE("errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 > 3.0);
  CHECK(e2 / e3 > 3.0);
}

TEST_CASE("spatially constant data follow the ODE") {
  const Grid g{1, 16, 1.0};
  const Params p = Params::e1(0.5);
  const Vec3 y0{0.2, 0.1, 0.3};
  const State s = run_to(StepPlan{p, g, 0.002, 5.0}, State::constant(g, y0));
  const OdeSolution sol = ode_solve(p, y0, 5.0, 1e-3);
  CHECK(sup_distance(s, sol.values.back()) < 1e-5);
  // the nodes of a constant field stay equal
  CHECK(s.u.max_value() - s.u.inf_value() <= 1e-14);
}

TEST_CASE("final step lands on the horizon") {
  const Grid g{1, 16, 1.0};
  Observers obs;
  obs.sample_every = 1000;
  const Observation o = integrate(StepPlan{Params::e1(0.5), g, 0.03, 1.0}, State::constant(g, {0.5, 0.1, 0.1}), obs);
  CHECK(o.samples.front().t == 0.0);
  CHECK(o.samples.back().t == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("blow-up guard") {
  const Grid g{1, 16, 1.0};
  StepPlan plan{Params::e1(0.5), g, 0.01, 1.0};
  plan.blowup_limit = 0.3;
  CHECK_THROWS_AS(integrate(plan, State::constant(g, {0.5, 0.5, 0.5}), Observers{}), NumericGuardError);
}

TEST_CASE("ODE reproduces the logistic closed form") {
  // gamma = 0 decouples u: u' = (1 - u) u
  Params p = Params::e1(0.5);
  p.gamma = 0.0;
  const double T = std::log(2.0);
  const OdeSolution sol = ode_solve(p, {2.0, 0.0, 0.0}, T, 1e-3);
  CHECK(kappa_closed(2.0, T) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(sol.values.back()[0] - 4.0 / 3.0) <= 1e-8);
  CHECK(sol.times.back() == doctest::Approx(T).epsilon(1e-15));
}

TEST_CASE("omega closed form solves its Riccati equation") {
  // independent RK4 on w' = (vt - w) w
  for (double vt : {0.0, 0.8}) {
    for (double w0 : {0.3, 2.0}) {
      double w = w0;
      const int n = 20000;
      const double h = 5.0 / n;
      auto f = [&](double x) { return (vt - x) * x; };
      for (int i = 0; i < n; ++i) {
        const double k1 = f(w), k2 = f(w + h / 2 * k1), k3 = f(w + h / 2 * k2), k4 = f(w + h * k3);
        w += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
      CHECK(omega_closed(vt, w0, 5.0) == doctest::Approx(w).epsilon(1e-10));
    }
  }
}

TEST_CASE("PDE prey stays under the logistic comparison solution") {
  const Grid g{1, 128, 16.0};
  const Params p = Params::e1(0.5);
  InitSpec spec;
  spec.kind = InitKind::gaussian_bump;
  spec.amplitude = {2.0, 1.0, 1.0};
  const State s0 = initial_data(spec, g);
  REQUIRE(s0.sup()[0] == doctest::Approx(2.0).epsilon(1e-12));
  const Observation o = integrate(StepPlan{p, g, 0.01, 10.0}, s0, Observers{});
  const ComparisonReport r = comparison_check(o.samples, p, s0.sup()[0], s0.sup()[1], 1e-6);
  CHECK(r.u_ok());
  MESSAGE("max u excess " << r.max_u_excess << ", max v excess " << r.max_v_excess);
}

TEST_CASE("trajectory distance") {
  const Grid g{1, 8, 1.0};
  Trajectory a, b;
  a.push(0.0, State::constant(g, {1, 0, 0}));
  b.push(0.0, State::constant(g, {1, 0.25, 0}));
  CHECK(trajectory_distance(a, b) == doctest::Approx(0.25));
  b.push(1.0, State::constant(g, {1, 0, 0}));
  CHECK_THROWS(trajectory_distance(a, b));
}

TEST_CASE("single steps keep the trivial and prey-only states") {
  const Grid g{1, 32, 4.0};
  const Stepper st(StepPlan{Params::e2(0.3), g, 0.05, 1.0});
  CHECK(st.step(State::constant(g, {0, 0, 0})).sup() == Vec3{0, 0, 0});
  CHECK(sup_distance(st.step(State::constant(g, {1, 0, 0})), Vec3{1, 0, 0}) <= 1e-12);
  const Stepper e1(StepPlan{Params::e1(0.5), g, 0.05, 1.0});
  CHECK(sup_distance(e1.step(State::constant(g, {0.5, 0.5, 0.5})), Vec3{0.5, 0.5, 0.5}) <= 1e-10);
}

TEST_CASE("ODE: equilibrium data stay put") {
  const OdeSolution sol = ode_solve(Params::e1(0.5), {0.5, 0.5, 0.5}, 50.0, 0.01);
  for (const auto& y : sol.values) {
    for (double x : y) CHECK(std::abs(x - 0.5) <= 1e-14);
  }
}

TEST_CASE("omega decreases monotonically towards v_tilde") {
  double prev = 3.0;
  for (double t = 0.1; t <= 20.0; t += 0.1) {
    const double w = omega_closed(0.8, 3.0, t);
    CHECK(w < prev);
    CHECK(w > 0.8);
    prev = w;
  }
}

TEST_CASE("comparison: equality case and data below capacity") {
  const Grid g{1, 16, 4.0};
  Params p = Params::e1(0.5);
  p.gamma = 0.0;
  auto error = [&](double dt) {
    const Observation o = integrate(StepPlan{p, g, dt, 5.0}, State::constant(g, {2.0, 0.0, 0.0}), Observers{});
    double worst = 0.0;
    for (const auto& s : o.samples) worst = std::max(worst, std::abs(s.sup[0] - kappa_closed(2.0, s.t)));
    return worst;
  };
  const double e1 = error(0.01), e2 = error(0.005);
  MESSAGE("logistic errors " << e1 << " " << e2);
  CHECK(e1 <= 1e-4);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));

  InitSpec spec;
  spec.seed = 2;
  const Observation below = integrate(StepPlan{Params::e1(0.5), g, 0.01, 20.0}, initial_data(spec, g), Observers{});
  for (const auto& s : below.samples) CHECK(s.sup[0] < 1.0 + 1e-12);
}

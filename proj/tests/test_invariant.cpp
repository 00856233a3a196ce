#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rdpp/error.hpp"
#include "rdpp/invariant.hpp"
#include "rdpp/stepper.hpp"

using namespace rdpp;

namespace {

RunSettings quick(double T, int n = 64, double L = 16.0) {
  RunSettings r;
  r.grid = Grid{1, n, L};
  r.dt = 0.01;
  r.T = T;
  return r;
}

Params natural_params() {
  Params p;
  p.h = 0.5;
  p.gamma = 0.2;
  p.alpha = 0.25;
  p.theta = 0.1;
  p.m = 0.1;
  p.rho = 0.5;
  p.mu = 1.0;
  p.nu = 0.5;
  return p;
}

}  // namespace

TEST_CASE("region from thresholds") {
  const RegionSpec r = RegionSpec::from_thresholds(RegionKind::R, thresholds(Params::e1(0.5)));
  CHECK(r.box.hi[1] == doctest::Approx(2.0 / 3.0));
  CHECK(r.box.hi[2] == doctest::Approx(8.0 / 9.0));
  // E1 has no real u_
  CHECK_THROWS_AS(RegionSpec::from_thresholds(RegionKind::R_natural, thresholds(Params::e1(0.5))), PreconditionError);
  Params dead = Params::e1(0.5);
  dead.mu = 0.0;
  dead.alpha = 0.0;
  dead.m = 0.5;
  CHECK_THROWS_AS(RegionSpec::from_thresholds(RegionKind::R, thresholds(dead)), PreconditionError);
  CHECK_THROWS_AS(RegionSpec::custom({{0.5, 0, 0}, {0.4, 1, 1}}), PreconditionError);
}

TEST_CASE("R is invariant for E1 (short run)") {
  const Params p = Params::e1(0.5);
  const RegionSpec r = RegionSpec::from_thresholds(RegionKind::R, thresholds(p));
  const Verdict v = check_invariance(p, r, quick(10.0), 6, 100);
  CHECK(v.pass());
  CHECK(v.exits() == 0);
  CHECK(v.samples[3].seed == 103);
}

TEST_CASE("the far corner of R stays in R") {
  const Params p = Params::e1(0.5);
  const RegionSpec r = RegionSpec::from_thresholds(RegionKind::R, thresholds(p));
  const RunSettings run = quick(20.0);
  const State corner = State::constant(run.grid, {1.0, 2.0 / 3.0, 8.0 / 9.0});
  CHECK(check_invariance_from(p, r, run, {corner}).pass());
}

TEST_CASE("negative control: logistic growth leaves a sub-capacity box") {
  const Params p = Params::e1(0.5);
  const Thresholds th = thresholds(p);
  const RegionSpec shrunk = RegionSpec::custom({{0, 0, 0}, {0.5, *th.v_bar, *th.w_bar}});
  const RunSettings run = quick(10.0);
  const Verdict v = check_invariance_from(p, shrunk, run, {State::constant(run.grid, {0.49, 0.01, 0.01})});
  REQUIRE_FALSE(v.pass());
  REQUIRE(v.samples[0].first_exit_t);
  CHECK(*v.samples[0].component == 0);
  CHECK(*v.samples[0].first_exit_t > 0.0);
}

TEST_CASE("absorption from data above R") {
  const Params p = Params::e1(0.5);
  const RunSettings run = quick(200.0);
  const Verdict v = measure_absorption(p, State::constant(run.grid, {2.0, 1.6, 2.56}), 0.05, run);
  REQUIRE(v.pass());
  CHECK(*v.samples[0].t_eps > 0.0);
}

TEST_CASE("absorption time is zero inside R") {
  const Params p = Params::e1(0.5);
  const RunSettings run = quick(20.0);
  InitSpec spec;
  spec.box = {{0, 0, 0}, {1.0, 2.0 / 3.0, 8.0 / 9.0}};
  const Verdict v = measure_absorption(p, initial_data(spec, run.grid), 0.05, run);
  CHECK(*v.samples[0].t_eps == 0.0);
}

TEST_CASE("absorption time of the prey matches the logistic closed form") {
  // gamma = 0 and no predators: u = kappa(t), crossing 1 + eps at ln(21/2) for kappa0 = 2
  Params p = Params::e1(0.5);
  p.gamma = 0.0;
  const RunSettings run = quick(20.0, 16, 4.0);
  const Verdict v = measure_absorption(p, State::constant(run.grid, {2.0, 0.0, 0.0}), 0.05, run);
  REQUIRE(v.samples[0].t_eps);
  CHECK(std::abs(*v.samples[0].t_eps - std::log(10.5)) <= 1e-3);
}

TEST_CASE("absorption preconditions") {
  const RunSettings run = quick(1.0);
  const State s = State::constant(run.grid, {0.5, 0.5, 0.5});
  CHECK_THROWS_AS(measure_absorption(Params::e1(0.5), s, 0.0, run), PreconditionError);
}

TEST_CASE("lower-region scan finds admissible parameters") {
  Params base = natural_params();
  const auto found = lower_region_scan(base, {0.05, 0.1, 0.2, 0.5, 1.0}, {0.25, 0.5, 1.0, 2.0});
  CHECK(found.size() == 17);  // (0.5, 2), (1, 1), (1, 2) fail the square-root condition
  for (const auto& p : found) {
    const Thresholds th = thresholds(p);
    CHECK(*th.u_under > 0.0);
    CHECK(*th.v_under > 0.0);
    CHECK(*th.w_under > 0.0);
  }
}

TEST_CASE("R_natural is invariant and absorbing for scanned parameters") {
  const Params p = natural_params();
  const Thresholds th = thresholds(p);
  const RegionSpec nat = RegionSpec::from_thresholds(RegionKind::R_natural, th);
  const RunSettings run = quick(30.0);
  CHECK(check_invariance(p, nat, run, 4, 1).pass());

  // from inside R_natural: stays and is inside from the start
  const Vec3 mid{(nat.box.lo[0] + 1.0) / 2, (nat.box.lo[1] + nat.box.hi[1]) / 2, (nat.box.lo[2] + nat.box.hi[2]) / 2};
  const Verdict in = check_lower_region(p, State::constant(run.grid, mid), 0.5, 0.05, run);
  CHECK(in.pass());
  CHECK(*in.samples[0].t_eps == 0.0);

  // from below: enters the eps box after a positive time
  InitSpec spec;
  spec.box = {{0.3, 0.3, 0.3}, {0.5, 0.5, 0.5}};
  spec.seed = 8;
  const Verdict below = check_lower_region(p, initial_data(spec, run.grid), 0.3, 0.05, run);
  CHECK(below.pass());
  CHECK(*below.samples[0].t_eps > 0.0);
}

TEST_CASE("lower-region preconditions") {
  const Params p = natural_params();
  const RunSettings run = quick(1.0);
  CHECK_THROWS_AS(check_lower_region(p, State::constant(run.grid, {0.5, 0.0, 0.5}), 0.1, 0.05, run),
                  PreconditionError);
  CHECK_THROWS_AS(check_lower_region(p, State::constant(run.grid, {0.5, 0.2, 0.5}), 0.3, 0.05, run),
                  PreconditionError);
  CHECK_THROWS_AS(check_lower_region(Params::e1(0.5), State::constant(run.grid, {0.5, 0.5, 0.5}), 0.1, 0.05, run),
                  PreconditionError);
}

TEST_CASE("convergence to the prey-only state when v_bar <= 0") {
  Params p = Params::e1(0.5);
  p.mu = 0.0;
  p.alpha = 0.0;
  p.m = 0.5;
  p.gamma = 1.0;
  REQUIRE(*thresholds(p).v_bar <= 0.0);
  const RunSettings run = quick(100.0, 32, 8.0);
  InitSpec spec;
  spec.seed = 2;
  const Verdict v = measure_convergence(p, initial_data(spec, run.grid), {1.0, 0.0, 0.0}, 1e-3, run);
  CHECK(v.pass());
  CHECK(v.target);
}

TEST_CASE("strict positivity and nonnegativity along trajectories") {
  const Params p = Params::e2(0.3);
  const Grid g{1, 64, 16.0};
  InitSpec spec;
  spec.box = {{0.05, 0.05, 0.0}, {0.95, 0.6, 0.8}};
  spec.seed = 12;
  Observers obs;
  obs.sample_every = 10;
  const Observation o = integrate(StepPlan{p, g, 0.01, 20.0}, initial_data(spec, g), obs);
  for (std::size_t k = 1; k < o.samples.size(); ++k) {
    for (double x : o.samples[k].inf) CHECK(x > 0.0);
  }
}

TEST_CASE("infinite propagation speed proxy") {
  // a one-node bump (1/16 of the nodes); every node is positive after one step
  const Grid g{1, 16, 16.0};
  Field u(g), v(g), w(g);
  u[8] = 1.0;
  v[8] = 0.5;
  const State s0(u, v, w);
  Observers obs;
  obs.keep_states = true;
  const Observation o = integrate(StepPlan{Params::e1(0.5), g, 0.5, 5.0}, s0, obs);
  for (std::size_t k = 1; k < o.states.size(); ++k) {
    CHECK(o.states.states[k].u.inf_value() > 0.0);
    CHECK(o.states.states[k].v.inf_value() > 0.0);
    CHECK(o.states.states[k].w.inf_value() > 0.0);
  }
}

TEST_CASE("verdict csv") {
  Verdict v;
  SampleVerdict a;
  a.sample = 0;
  a.seed = 4;
  SampleVerdict b;
  b.sample = 1;
  b.seed = 5;
  b.pass = false;
  b.first_exit_t = 0.25;
  b.component = 1;
  v.samples = {a, b};
  std::ostringstream os;
  write_verdict_csv(os, v);
  CHECK(os.str() == "sample,seed,pass,first_exit_t,component,T_eps\n0,4,1,,,\n1,5,0,0.25,v,\n");
}

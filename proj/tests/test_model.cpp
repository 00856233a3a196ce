#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rdpp/error.hpp"
#include "rdpp/grid.hpp"
#include "rdpp/model.hpp"

using namespace rdpp;

namespace {

// A parameter set where every threshold exists and is positive.
Params natural_params() {
  Params p;
  p.d = 1.0;
  p.h = 0.5;
  p.gamma = 0.1;
  p.alpha = 0.25;
  p.theta = 0.25;
  p.m = 0.25;
  p.rho = 0.5;
  p.mu = 1.0;
  p.nu = 0.5;
  return p;
}

}  // namespace

TEST_CASE("E1 constant state is an equilibrium for every h") {
  for (double h : {0.1, 0.5, 1.0, 2.0, 7.0}) {
    const Vec3 f = reaction(Params::e1(h), 0.5, 0.5, 0.5);
    for (double x : f) CHECK(std::abs(x) <= 1e-15);
  }
}

TEST_CASE("E2 constant state is an equilibrium for every h") {
  for (double h : {0.1, 0.25, 0.5, 0.75, 3.0}) {
    const Vec3 f = reaction(Params::e2(h), 0.5, 0.5, 0.5);
    for (double x : f) CHECK(std::abs(x) <= 1e-15);
  }
}

TEST_CASE("E1 thresholds at h = 1/2") {
  const Thresholds t = thresholds(Params::e1(0.5));
  REQUIRE(t.v_bar);
  REQUIRE(t.w_bar);
  CHECK(*t.v_bar == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(*t.w_bar == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  // with u_ = 1/4 + i sqrt(5/48): no real lower threshold
  CHECK_FALSE(t.u_under);
  CHECK(*t.v_flat == 0.0);
  CHECK(*t.w_flat == 0.0);
}

TEST_CASE("thresholds against exact rational evaluation") {
  // sympy evaluation of the closed forms at (h, gamma, alpha, theta, m, rho, mu, nu)
  // = (1/2, 1/10, 1/4, 1/4, 1/4, 1/2, 1, 1/2)
  Params p = natural_params();
  p.m = 0.1;
  p.theta = 0.1;
  const Thresholds t = thresholds(p);
  REQUIRE(t.v_bar);
  REQUIRE(t.u_under);
  REQUIRE(t.v_under);
  REQUIRE(t.w_under);
  CHECK(*t.v_bar == doctest::Approx(0.78333333333333333).epsilon(1e-14));
  CHECK(*t.w_bar == doctest::Approx(0.67888888888888889).epsilon(1e-14));
  CHECK(*t.u_under == doctest::Approx(0.9458208581716034).epsilon(1e-13));
  CHECK(*t.v_under == doctest::Approx(0.7677196130713041).epsilon(1e-13));
  CHECK(*t.w_under == doctest::Approx(0.6557674305725952).epsilon(1e-13));
  CHECK(*t.v_flat == doctest::Approx(0.25 * 0.1 / 0.5 - 0.1));
}

TEST_CASE("tilde thresholds from kappa0 = 2 on E1") {
  const Thresholds t = thresholds(Params::e1(0.5), 2.0);
  CHECK(*t.v_tilde == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(*t.w_tilde == doctest::Approx(1.28).epsilon(1e-14));
  // kappa0 = 1 reproduces the bar quantities
  const Thresholds one = thresholds(Params::e1(0.5), 1.0);
  CHECK(*one.v_tilde == doctest::Approx(*one.v_bar));
  CHECK(*one.w_tilde == doctest::Approx(*one.w_bar));
}

TEST_CASE("rho = 0 leaves the 1/rho thresholds absent") {
  Params p = Params::e1(0.5);
  p.alpha = 0.0;
  p.rho = 0.0;
  const Thresholds t = thresholds(p);
  REQUIRE(t.v_bar);
  CHECK(*t.v_bar == doctest::Approx(p.mu / 1.5));
  CHECK_FALSE(t.w_bar);
  CHECK_FALSE(t.v_flat);
  CHECK_FALSE(t.w_flat);
  CHECK_FALSE(t.w_tilde);
}

TEST_CASE("parameter validation") {
  Params p = Params::e1(0.5);
  CHECK_NOTHROW(p.validate());
  p.d = 0.0;
  CHECK_THROWS(p.validate());
  // E2 as published has m = theta/2 < theta
  p = Params::e2(0.5);
  CHECK_FALSE(p.mortality_relations);
  CHECK_NOTHROW(p.validate());
  p.mortality_relations = true;
  CHECK_THROWS(p.validate());
  p = Params::e1(0.5);
  p.rho = 0.1;  // < alpha
  CHECK_THROWS(p.validate());
  p = Params::e1(0.5);
  p.nu = -1.0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("reaction refuses the Holling pole") {
  const Params p = Params::e1(0.5);
  CHECK_THROWS_AS(reaction(p, -0.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(jacobian(p, -0.6, 1.0, 1.0), DomainError);
  CHECK_NOTHROW(reaction(p, -0.49, 1.0, 1.0));
}

TEST_CASE("jacobian matches central differences") {
  Params p = natural_params();
  const Vec3 y{0.7, 0.3, 0.9};
  const auto J = jacobian(p, y[0], y[1], y[2]);
  const double step = 1e-6;
  for (int c = 0; c < 3; ++c) {
    Vec3 a = y, b = y;
    a[c] += step;
    b[c] -= step;
    const Vec3 fa = reaction(p, a[0], a[1], a[2]);
    const Vec3 fb = reaction(p, b[0], b[1], b[2]);
    for (int r = 0; r < 3; ++r) CHECK(J(r, c) == doctest::Approx((fa[r] - fb[r]) / (2 * step)).epsilon(1e-8));
  }
}

TEST_CASE("Lipschitz bound dominates sampled difference quotients") {
  const Params p = Params::e2(0.3);
  const Vec3 upper{2.0, 2.0, 2.0};
  const double L = reaction_lipschitz(p, upper);
  for (int i = 0; i < 200; ++i) {
    const Vec3 a{std::fmod(0.37 * i, 2.0), std::fmod(0.53 * i, 2.0), std::fmod(0.71 * i, 2.0)};
    const Vec3 b{std::fmod(0.19 * i + 0.1, 2.0), std::fmod(0.29 * i + 0.3, 2.0), std::fmod(0.83 * i, 2.0)};
    const Vec3 fa = reaction(p, a[0], a[1], a[2]), fb = reaction(p, b[0], b[1], b[2]);
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 3; ++c) {
      num = std::max(num, std::abs(fa[c] - fb[c]));
      den = std::max(den, std::abs(a[c] - b[c]));
    }
    if (den > 0.0) CHECK(num <= L * den * (1 + 1e-12));
  }
}

TEST_CASE("uniform bound N") {
  const Params p = Params::e1(0.5);
  CHECK(uniform_bound(p, 0.5, 0.1, 0.1) == doctest::Approx(1.0));
  // kappa0 = 2 pulls in v_tilde = 0.8 and w_tilde = 1.28
  CHECK(uniform_bound(p, 2.0, 0.1, 0.1) == doctest::Approx(2.0));
  CHECK(uniform_bound(p, 1.0, 0.1, 3.0) == doctest::Approx(3.0));
  const Params big = Params::e1(0.5);
  CHECK(uniform_bound(big, 1.5, 0.0, 0.0) >= *thresholds(big, 1.5).w_tilde);
}

TEST_CASE("trivial and prey-only states are stationary for any parameters") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Params p;
    p.h = 0.01 + 3 * rng.uniform();
    p.gamma = 3 * rng.uniform();
    p.alpha = 3 * rng.uniform();
    p.theta = 3 * rng.uniform();
    p.m = 3 * rng.uniform();
    p.rho = 3 * rng.uniform();
    p.mu = 3 * rng.uniform();
    p.nu = 3 * rng.uniform();
    for (const Vec3& y : {Vec3{0, 0, 0}, Vec3{1, 0, 0}}) {
      const Vec3 f = reaction(p, y[0], y[1], y[2]);
      CHECK(f == Vec3{0.0, 0.0, 0.0});
    }
    // the prey direction at the origin always grows
    CHECK(jacobian(p, 0, 0, 0)(0, 0) == 1.0);
  }
}

TEST_CASE("v_bar <= 0 regime and logistic linearization") {
  Params p = Params::e1(0.5);
  p.mu = 0.0;
  p.alpha = 0.0;
  p.m = 1.0;
  CHECK(*thresholds(p).v_bar == -1.0);
  p.gamma = 0.0;
  const auto J = jacobian(p, 1.0, 0.0, 0.0);
  CHECK(J(0, 0) == -1.0);
  CHECK(J(0, 1) == 0.0);
}

TEST_CASE("jacobian matches central differences at random admissible points") {
  Rng rng(10);
  for (int i = 0; i < 10; ++i) {
    Params p;
    p.h = 0.1 + rng.uniform();
    p.gamma = 2 * rng.uniform();
    p.theta = rng.uniform();
    p.m = p.theta + rng.uniform();
    p.alpha = rng.uniform();
    p.rho = p.alpha + rng.uniform();
    p.mu = 2 * rng.uniform();
    p.nu = 2 * rng.uniform();
    const Vec3 y{2 * rng.uniform(), 2 * rng.uniform(), 2 * rng.uniform()};
    const auto J = jacobian(p, y[0], y[1], y[2]);
    const double step = 1e-6;
    for (int c = 0; c < 3; ++c) {
      Vec3 a = y, b = y;
      a[c] += step;
      b[c] -= step;
      const Vec3 fa = reaction(p, a[0], a[1], a[2]), fb = reaction(p, b[0], b[1], b[2]);
      for (int r = 0; r < 3; ++r) {
        const double fd = (fa[r] - fb[r]) / (2 * step);
        CHECK(std::abs(J(r, c) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

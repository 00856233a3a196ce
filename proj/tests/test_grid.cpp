#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rdpp/csv.hpp"
#include "rdpp/error.hpp"
#include "rdpp/grid.hpp"

using namespace rdpp;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Field(Grid{1, 3, 1.0}), PreconditionError);
  CHECK_THROWS_AS(Field(Grid{3, 8, 1.0}), PreconditionError);
  CHECK_THROWS_AS(Field(Grid{1, 8, 0.0}), PreconditionError);
  CHECK(Grid{2, 8, 1.0}.size() == 64);
}

TEST_CASE("discrete Laplacian of a Fourier mode") {
  const Grid g{1, 32, 2.0};
  const double dx = g.spacing();
  const int k = 3;
  std::vector<double> xs(g.n);
  for (int i = 0; i < g.n; ++i) xs[i] = std::cos(2 * std::numbers::pi * k * i / g.n);
  const Field f(g, xs);
  const Field lap = laplacian(f);
  const double lambda = -(2 - 2 * std::cos(2 * std::numbers::pi * k / g.n)) / (dx * dx);
  for (int i = 0; i < g.n; ++i) CHECK(lap[i] == doctest::Approx(lambda * xs[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("2-D Laplacian is the sum of the axis stencils") {
  const Grid g{2, 8, 1.0};
  Field f(g);
  f[3 * 8 + 5] = 1.0;
  const Field lap = laplacian(f);
  const double inv = 1.0 / (g.spacing() * g.spacing());
  CHECK(lap[3 * 8 + 5] == doctest::Approx(-4 * inv));
  CHECK(lap[2 * 8 + 5] == doctest::Approx(inv));
  CHECK(lap[3 * 8 + 6] == doctest::Approx(inv));
  CHECK(lap.sum() == doctest::Approx(0.0).scale(inv));
}

TEST_CASE("gradient of a linear-looking mode") {
  const Grid g{1, 64, 1.0};
  std::vector<double> xs(g.n);
  for (int i = 0; i < g.n; ++i) xs[i] = std::sin(2 * std::numbers::pi * i / g.n);
  const double dx = g.spacing();
  // central difference of sin has amplitude sin(2 pi dx)/dx
  CHECK(gradient_sup(Field(g, xs)) == doctest::Approx(std::sin(2 * std::numbers::pi * dx) / dx).epsilon(1e-3));
}

TEST_CASE("initial data kinds are nonnegative and deterministic") {
  const Grid g{1, 128, 8.0};
  for (InitKind k : {InitKind::constant, InitKind::gaussian_bump, InitKind::random_fourier, InitKind::box_random}) {
    InitSpec spec;
    spec.kind = k;
    spec.seed = 42;
    spec.amplitude = {1.0, 0.5, 0.25};
    const State a = initial_data(spec, g);
    const State b = initial_data(spec, g);
    CHECK(a.nonnegative());
    for (int c = 0; c < 3; ++c) {
      CHECK(a[c].all_finite());
      for (std::size_t i = 0; i < a[c].size(); ++i) CHECK(a[c][i] == b[c][i]);
    }
    CHECK(parse_init_kind(to_string(k)) == k);
  }
}

TEST_CASE("box-random stays in its box") {
  for (int dim : {1, 2}) {
    const Grid g{dim, 32, 4.0};
    InitSpec spec;
    spec.kind = InitKind::box_random;
    spec.box = {{0.1, 0.0, 0.2}, {0.9, 2.0 / 3.0, 8.0 / 9.0}};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      spec.seed = seed;
      const State s = initial_data(spec, g);
      CHECK(box_membership(s, spec.box, 0.0));
    }
  }
  InitSpec bad;
  bad.box = {{0.5, 0.0, 0.0}, {0.4, 1.0, 1.0}};
  CHECK_THROWS_AS(initial_data(bad, Grid{}), PreconditionError);
}

TEST_CASE("seeds give different draws") {
  InitSpec spec;
  spec.seed = 1;
  const State a = initial_data(spec, Grid{});
  spec.seed = 2;
  const State b = initial_data(spec, Grid{});
  CHECK(sup_distance(a, b) > 1e-3);
}

TEST_CASE("splitmix64 reference stream") {
  // first outputs of splitmix64 seeded with 0
  Rng r(0);
  CHECK(r.next() == 0xe220a8397b1dcdafULL);
  CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
  for (int i = 0; i < 1000; ++i) {
    const double x = r.uniform();
    CHECK((x >= 0.0 && x < 1.0));
  }
}

TEST_CASE("state helpers") {
  const Grid g{1, 8, 1.0};
  const State s = State::constant(g, {1.0, 2.0 / 3.0, 8.0 / 9.0});
  CHECK(box_membership(s, {0, 0, 0}, {1.0, 2.0 / 3.0, 8.0 / 9.0}, 0.0));
  CHECK_FALSE(box_membership(s, {0, 0, 0}, {0.5, 1.0, 1.0}, 1e-8));
  CHECK(sup_distance(s, Vec3{1.0, 0.0, 0.0}) == doctest::Approx(8.0 / 9.0));
  CHECK(s.sup()[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Kahan sum of many small values") {
  const Grid g{1, 1 << 16, 1.0};
  Field f(g, 0.1);
  CHECK(f.sum() == doctest::Approx(0.1 * (1 << 16)).epsilon(1e-15));
}

TEST_CASE("csv number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(csv::num(x)) == x);
  }
  CHECK(csv::num(std::optional<double>{}).empty());
  std::ostringstream os;
  csv::Writer w(os, {"a", "b"});
  w.cell(1).cell(0.5);
  w.end_row();
  CHECK(os.str() == "a,b\n1,0.5\n");
  w.cell(1);
  CHECK_THROWS(w.end_row());
}

TEST_CASE("field csv layout") {
  std::ostringstream os;
  write_field_csv(os, Field(Grid{2, 4, 1.0}, 1.0));
  std::string first;
  std::istringstream in(os.str());
  std::getline(in, first);
  CHECK(first == "index,index2,x,y,value");
}

TEST_CASE("Laplacian annihilates constants and sums to zero") {
  const Grid g{1, 64, 3.0};
  const Field lap = laplacian(Field(g, 2.5));
  for (std::size_t i = 0; i < lap.size(); ++i) CHECK(lap[i] == 0.0);
  Rng r(6);
  for (int dim : {1, 2}) {
    const Grid gg{dim, 32, 5.0};
    Field f(gg);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = r.uniform() - 0.5;
    CHECK(std::abs(laplacian(f).sum()) <= 1e-10 * f.sup_norm());
  }
}

TEST_CASE("box membership examples") {
  const Grid g{1, 16, 1.0};
  const Vec3 lo{0, 0, 0}, hi{1.0, 2.0 / 3.0, 8.0 / 9.0};
  CHECK(box_membership(State::constant(g, {0, 0, 0}), lo, hi, 0.0));
  State s = State::constant(g, {0.5, 0.1, 0.1});
  s.u[7] = 1.0 + 1e-6;
  CHECK_FALSE(box_membership(s, lo, hi, 1e-8));
  CHECK(box_membership(State::constant(g, hi), lo, hi, 0.0));
}

TEST_CASE("constant data with zero amplitude") {
  InitSpec spec;
  spec.kind = InitKind::constant;
  spec.amplitude = {0, 0, 0};
  const State s = initial_data(spec, Grid{1, 16, 1.0});
  CHECK(s.sup() == Vec3{0, 0, 0});
}

#include "rdpp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rdpp/csv.hpp"
#include "rdpp/error.hpp"
#include "rdpp/semigroup.hpp"

namespace rdpp {

void Grid::validate() const {
  if (dim != 1 && dim != 2) throw PreconditionError("grid: dim must be 1 or 2");
  if (n < 4) throw PreconditionError("grid: need at least 4 points per axis");
  if (!(length > 0.0) || !std::isfinite(length)) throw PreconditionError("grid: length must be > 0");
}

Field::Field(const Grid& grid, double value) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.size(), value);
}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) throw PreconditionError("field: value count does not match grid");
}

double Field::sup_norm() const {
  double s = 0.0;
  for (double x : values_) s = std::max(s, std::abs(x));
  return s;
}

double Field::inf_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::sum() const {
  // Kahan summation; the lattice sum is a conservation check.
  double s = 0.0, c = 0.0;
  for (double x : values_) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

bool Field::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
}

State::State(Field u_, Field v_, Field w_) : u(std::move(u_)), v(std::move(v_)), w(std::move(w_)) {
  if (!(u.grid() == v.grid()) || !(u.grid() == w.grid())) {
    throw PreconditionError("state: components must share one grid");
  }
}

State State::constant(const Grid& grid, const Vec3& value) {
  return State(Field(grid, value[0]), Field(grid, value[1]), Field(grid, value[2]));
}

Vec3 State::sup() const { return {u.max_value(), v.max_value(), w.max_value()}; }
Vec3 State::inf() const { return {u.inf_value(), v.inf_value(), w.inf_value()}; }
bool State::nonnegative() const { return u.nonnegative() && v.nonnegative() && w.nonnegative(); }

Field laplacian(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n;
  const double inv = 1.0 / (g.spacing() * g.spacing());
  auto in = f.values();
  std::vector<double> out(in.size());
  auto wrap = [n](int i) { return (i + n) % n; };
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) out[j] = (in[wrap(j + 1)] - 2.0 * in[j] + in[wrap(j - 1)]) * inv;
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t c = std::size_t(i) * n + j;
        const double xx = in[std::size_t(wrap(i + 1)) * n + j] + in[std::size_t(wrap(i - 1)) * n + j];
        const double yy = in[std::size_t(i) * n + wrap(j + 1)] + in[std::size_t(i) * n + wrap(j - 1)];
        out[c] = (xx + yy - 4.0 * in[c]) * inv;
      }
    }
  }
  return Field(g, std::move(out));
}

double gradient_sup(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n;
  const double inv = 0.5 / g.spacing();
  auto in = f.values();
  auto wrap = [n](int i) { return (i + n) % n; };
  double best = 0.0;
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) best = std::max(best, std::abs(in[wrap(j + 1)] - in[wrap(j - 1)]) * inv);
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double dx = in[std::size_t(wrap(i + 1)) * n + j] - in[std::size_t(wrap(i - 1)) * n + j];
        const double dy = in[std::size_t(i) * n + wrap(j + 1)] - in[std::size_t(i) * n + wrap(j - 1)];
        best = std::max({best, std::abs(dx) * inv, std::abs(dy) * inv});
      }
    }
  }
  return best;
}

bool box_membership(const State& s, const Vec3& lo, const Vec3& hi, double tol) {
  for (int c = 0; c < 3; ++c) {
    for (double x : s[c].values()) {
      if (!(x >= lo[c] - tol && x <= hi[c] + tol)) return false;
    }
  }
  return true;
}

double sup_distance(const State& s, const Vec3& target) {
  double d = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (double x : s[c].values()) d = std::max(d, std::abs(x - target[c]));
  }
  return d;
}

double sup_distance(const State& a, const State& b) {
  double d = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto x = a[c].values();
    auto y = b[c].values();
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  }
  return d;
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "constant") return InitKind::constant;
  if (name == "gaussian-bump") return InitKind::gaussian_bump;
  if (name == "random-fourier") return InitKind::random_fourier;
  if (name == "box-random") return InitKind::box_random;
  throw PreconditionError("unknown initial data kind '" + name + "'");
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::constant: return "constant";
    case InitKind::gaussian_bump: return "gaussian-bump";
    case InitKind::random_fourier: return "random-fourier";
    case InitKind::box_random: return "box-random";
  }
  return "?";
}

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Node coordinates (x, y); y = 0 in 1-D.
std::pair<double, double> coords(const Grid& g, std::size_t idx) {
  const double dx = g.spacing();
  if (g.dim == 1) return {double(idx) * dx, 0.0};
  return {double(idx / g.n) * dx, double(idx % g.n) * dx};
}

Field gaussian_bump(const Grid& g, double amplitude, double width_fraction) {
  const double L = g.length;
  const double sigma = width_fraction * L;
  const double c = L / 2;
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto [x, y] = coords(g, i);
    auto periodized = [&](double s) {
      double acc = 0.0;
      for (int img = -2; img <= 2; ++img) {
        const double r = s - c + img * L;
        acc += std::exp(-r * r / (2 * sigma * sigma));
      }
      return acc;
    };
    f[i] = amplitude * periodized(x) * (g.dim == 2 ? periodized(y) : 1.0);
  }
  return f;
}

Field random_fourier(const Grid& g, double amplitude, int modes, Rng& rng) {
  const double k0 = 2.0 * std::numbers::pi / g.length;
  struct Mode {
    int kx, ky;
    double a, b;
  };
  std::vector<Mode> spectrum;
  const int ky_max = g.dim == 2 ? modes : 0;
  for (int kx = 0; kx <= modes; ++kx) {
    for (int ky = 0; ky <= ky_max; ++ky) {
      if (kx == 0 && ky == 0) continue;
      const double decay = 1.0 / std::hypot(double(kx), double(ky));
      spectrum.push_back({kx, ky, (2 * rng.uniform() - 1) * decay, (2 * rng.uniform() - 1) * decay});
    }
  }
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto [x, y] = coords(g, i);
    double s = 0.0;
    for (const auto& m : spectrum) {
      const double phase = k0 * (m.kx * x + m.ky * y);
      s += m.a * std::cos(phase) + m.b * std::sin(phase);
    }
    f[i] = s;
  }
  const double norm = std::max(f.sup_norm(), 1e-300);
  for (double& x : f.data()) x = amplitude * std::max(0.0, (0.5 + x / norm) / 1.5);
  return f;
}

}  // namespace

State initial_data(const InitSpec& spec, const Grid& grid) {
  grid.validate();
  for (double a : spec.amplitude) {
    if (!(a >= 0.0)) throw PreconditionError("initial_data: amplitude must be >= 0");
  }
  Rng rng(spec.seed);
  switch (spec.kind) {
    case InitKind::constant:
      return State::constant(grid, spec.amplitude);
    case InitKind::gaussian_bump:
      return State(gaussian_bump(grid, spec.amplitude[0], spec.bump_width),
                   gaussian_bump(grid, spec.amplitude[1], spec.bump_width),
                   gaussian_bump(grid, spec.amplitude[2], spec.bump_width));
    case InitKind::random_fourier: {
      Field u = random_fourier(grid, spec.amplitude[0], spec.modes, rng);
      Field v = random_fourier(grid, spec.amplitude[1], spec.modes, rng);
      Field w = random_fourier(grid, spec.amplitude[2], spec.modes, rng);
      return State(std::move(u), std::move(v), std::move(w));
    }
    case InitKind::box_random: {
      const Box& b = spec.box;
      for (int c = 0; c < 3; ++c) {
        if (!(b.lo[c] >= 0.0 && b.lo[c] <= b.hi[c])) {
          throw PreconditionError("initial_data: box-random needs 0 <= lo <= hi");
        }
      }
      const double tsmooth = spec.smoothing < 0 ? grid.spacing() * grid.spacing() : spec.smoothing;
      const SemigroupPlan plan(grid, 1.0);
      State s = State::constant(grid, {0.0, 0.0, 0.0});
      for (int c = 0; c < 3; ++c) {
        Field f(grid);
        for (double& x : f.data()) x = b.lo[c] + (b.hi[c] - b.lo[c]) * rng.uniform();
        f = plan.apply(f, tsmooth);
        // The smoothing is an averaging; pull round-off back into the box.
        for (double& x : f.data()) x = std::clamp(x, b.lo[c], b.hi[c]);
        s[c] = std::move(f);
      }
      return s;
    }
  }
  throw PreconditionError("initial_data: invalid kind");
}

void write_field_csv(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  if (g.dim == 1) {
    csv::Writer w(os, {"index", "x", "value"});
    for (std::size_t i = 0; i < f.size(); ++i) {
      w.cell(static_cast<unsigned long long>(i)).cell(coords(g, i).first).cell(f[i]);
      w.end_row();
    }
  } else {
    csv::Writer w(os, {"index", "index2", "x", "y", "value"});
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto [x, y] = coords(g, i);
      w.cell(static_cast<unsigned long long>(i / g.n))
          .cell(static_cast<unsigned long long>(i % g.n))
          .cell(x)
          .cell(y)
          .cell(f[i]);
      w.end_row();
    }
  }
}

}  // namespace rdpp

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rdpp/model.hpp"

namespace rdpp {

/// Periodic lattice with n nodes per axis on a square of side `length`.
struct Grid {
  int dim = 1;
  int n = 64;
  double length = 1.0;

  double spacing() const { return length / n; }
  std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n); }
  void validate() const;
  bool operator==(const Grid&) const = default;
};

/// Scalar grid function. Node (i, j) of a 2-D grid lives at index i * n + j.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double value = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> data() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double sup_norm() const;
  double inf_value() const;
  double max_value() const;
  double sum() const;
  bool all_finite() const;
  bool nonnegative() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

struct State {
  Field u, v, w;

  State() = default;
  State(Field u_, Field v_, Field w_);
  static State constant(const Grid& grid, const Vec3& value);

  const Grid& grid() const { return u.grid(); }
  const Field& operator[](int c) const { return c == 0 ? u : (c == 1 ? v : w); }
  Field& operator[](int c) { return c == 0 ? u : (c == 1 ? v : w); }
  Vec3 sup() const;
  Vec3 inf() const;
  bool nonnegative() const;
};

struct Box {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{0.0, 0.0, 0.0};
};

Field laplacian(const Field& f);

/// Largest central-difference partial derivative over all axes and nodes.
double gradient_sup(const Field& f);

inline double sup_norm(const Field& f) { return f.sup_norm(); }
inline double inf_value(const Field& f) { return f.inf_value(); }

/// True iff every node of every component lies in [lo - tol, hi + tol].
bool box_membership(const State& s, const Vec3& lo, const Vec3& hi, double tol);
inline bool box_membership(const State& s, const Box& b, double tol) {
  return box_membership(s, b.lo, b.hi, tol);
}

/// Largest componentwise distance max_c sup_x |s_c(x) - target_c|.
double sup_distance(const State& s, const Vec3& target);
double sup_distance(const State& a, const State& b);

enum class InitKind { constant, gaussian_bump, random_fourier, box_random };

InitKind parse_init_kind(const std::string& name);
std::string to_string(InitKind kind);

struct InitSpec {
  InitKind kind = InitKind::box_random;
  Vec3 amplitude{1.0, 1.0, 1.0};  ///< per component; box_random ignores it
  std::uint64_t seed = 0;
  Box box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};  ///< box_random target box
  double bump_width = 0.1;   ///< gaussian width as a fraction of the period
  int modes = 4;             ///< highest Fourier mode of random_fourier
  double smoothing = -1.0;   ///< box_random heat time; < 0 means one grid spacing squared
};

/// Nonnegative smooth periodic initial data.
State initial_data(const InitSpec& spec, const Grid& grid);

/// Counter-based uniform variate in [0, 1); identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Grid CSV: `index,x,value` in 1-D, `index,index2,x,y,value` in 2-D.
void write_field_csv(std::ostream& os, const Field& f);

}  // namespace rdpp

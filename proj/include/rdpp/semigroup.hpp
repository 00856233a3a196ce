#pragma once

#include <memory>
#include <vector>

#include "rdpp/grid.hpp"

namespace rdpp {

/// Exact exponential of d times the periodic second-order Laplacian, applied
/// through the discrete Fourier transform that diagonalizes the circulant
/// stencil. Immutable; apply() may be called concurrently.
class SemigroupPlan {
 public:
  SemigroupPlan(const Grid& grid, double diffusion);

  const Grid& grid() const { return grid_; }
  double diffusion() const { return diffusion_; }

  /// Per-axis eigenvalues -(2 - 2 cos(2 pi k / n)) / dx^2, k = 0..n-1.
  const std::vector<double>& axis_eigenvalues() const { return eigenvalues_; }

  /// exp(t d Lap) f. Throws PreconditionError for t < 0. When f >= 0 the
  /// round-off negatives of the transform are clamped to zero.
  Field apply(const Field& f, double t) const;

 private:
  struct Transform;
  Grid grid_;
  double diffusion_;
  std::vector<double> eigenvalues_;
  std::shared_ptr<const Transform> transform_;
};

inline Field heat_apply(const SemigroupPlan& plan, const Field& f, double t) {
  return plan.apply(f, t);
}

/// Pointwise exp(-rho t) w.
Field decay_apply(const Field& w, double rho, double t);

/// Two-parameter evolution family for d Lap - psi(x, t) on a time grid.
/// Each interval [t_k, t_{k+1}] is split into substeps with
/// dt_sub * sup psi <= max_decay; on a substep [a, b] the update is
/// exp(-psi(a) dt_sub/2) exp(dt_sub d Lap) exp(-psi(b) dt_sub/2) with psi
/// linearly interpolated between the stored snapshots.
class EvolutionOperator {
 public:
  EvolutionOperator(SemigroupPlan plan, std::vector<double> times, std::vector<Field> psi,
                    double max_decay = 0.1);

  const SemigroupPlan& plan() const { return plan_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t intervals() const { return times_.size() - 1; }
  int substeps(std::size_t k) const { return substeps_[k]; }

  /// U(t_{k+1}, t_k) f.
  Field step(const Field& f, std::size_t k) const;

  /// U(t_{t_index}, t_{s_index}) f.
  Field apply(const Field& f, std::size_t s_index, std::size_t t_index) const;

 private:
  SemigroupPlan plan_;
  std::vector<double> times_;
  std::vector<Field> psi_;
  std::vector<int> substeps_;
};

inline Field evolution_apply(const EvolutionOperator& op, const Field& f, std::size_t s_index,
                             std::size_t t_index) {
  return op.apply(f, s_index, t_index);
}

}  // namespace rdpp

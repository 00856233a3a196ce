#include "rdpp/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "rdpp/error.hpp"

namespace rdpp {

namespace {
// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SemigroupPlan::Transform {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;

  explicit Transform(const Grid& g) {
    const int n = g.n;
    real_size = g.size();
    complex_size = g.dim == 1 ? std::size_t(n / 2 + 1) : std::size_t(n) * std::size_t(n / 2 + 1);
    double* re = fftw_alloc_real(real_size);
    fftw_complex* co = fftw_alloc_complex(complex_size);
    // ESTIMATE keeps the plan (and hence every output bit) reproducible.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    {
      std::lock_guard lock(planner_mutex());
      if (g.dim == 1) {
        forward = fftw_plan_dft_r2c_1d(n, re, co, flags);
        backward = fftw_plan_dft_c2r_1d(n, co, re, flags);
      } else {
        forward = fftw_plan_dft_r2c_2d(n, n, re, co, flags);
        backward = fftw_plan_dft_c2r_2d(n, n, co, re, flags);
      }
    }
    fftw_free(re);
    fftw_free(co);
    if (!forward || !backward) throw Error("semigroup: FFT planning failed");
  }

  ~Transform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;
};

SemigroupPlan::SemigroupPlan(const Grid& grid, double diffusion)
    : grid_(grid), diffusion_(diffusion) {
  grid_.validate();
  if (!(diffusion >= 0.0) || !std::isfinite(diffusion)) {
    throw PreconditionError("semigroup: diffusion coefficient must be finite and >= 0");
  }
  const double dx = grid_.spacing();
  eigenvalues_.resize(grid_.n);
  for (int k = 0; k < grid_.n; ++k) {
    eigenvalues_[k] = -(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / grid_.n)) / (dx * dx);
  }
  eigenvalues_[0] = 0.0;
  transform_ = std::make_shared<const Transform>(grid_);
}

Field SemigroupPlan::apply(const Field& f, double t) const {
  if (!(t >= 0.0)) throw PreconditionError("heat_apply: t must be >= 0");
  if (!(f.grid() == grid_)) throw PreconditionError("heat_apply: field lives on a different grid");
  if (t == 0.0 || diffusion_ == 0.0) return f;

  const bool nonneg = f.nonnegative();
  std::vector<double> re(f.values().begin(), f.values().end());
  std::vector<std::complex<double>> co(transform_->complex_size);
  auto* co_ptr = reinterpret_cast<fftw_complex*>(co.data());
  fftw_execute_dft_r2c(transform_->forward, re.data(), co_ptr);

  const double scale = 1.0 / double(transform_->real_size);
  const double td = t * diffusion_;
  const int n = grid_.n;
  const int half = n / 2 + 1;
  if (grid_.dim == 1) {
    for (int k = 0; k < half; ++k) co[k] *= std::exp(td * eigenvalues_[k]) * scale;
  } else {
    std::vector<double> axis(n);
    for (int k = 0; k < n; ++k) axis[k] = std::exp(td * eigenvalues_[k]);
    for (int k1 = 0; k1 < n; ++k1) {
      for (int k2 = 0; k2 < half; ++k2) co[std::size_t(k1) * half + k2] *= axis[k1] * axis[k2] * scale;
    }
  }

  fftw_execute_dft_c2r(transform_->backward, co_ptr, re.data());
  if (nonneg) {
    for (double& x : re) x = std::max(x, 0.0);
  }
  return Field(grid_, std::move(re));
}

Field decay_apply(const Field& w, double rho, double t) {
  if (!(t >= 0.0) || !(rho >= 0.0)) throw PreconditionError("decay_apply: requires t >= 0 and rho >= 0");
  if (t == 0.0 || rho == 0.0) return w;
  Field out = w;
  const double factor = std::exp(-rho * t);
  for (double& x : out.data()) x *= factor;
  return out;
}

EvolutionOperator::EvolutionOperator(SemigroupPlan plan, std::vector<double> times,
                                     std::vector<Field> psi, double max_decay)
    : plan_(std::move(plan)), times_(std::move(times)), psi_(std::move(psi)) {
  if (times_.size() < 2) throw PreconditionError("evolution: need at least two time nodes");
  if (psi_.size() != times_.size()) throw PreconditionError("evolution: one psi snapshot per time node");
  if (!(max_decay > 0.0)) throw PreconditionError("evolution: max_decay must be > 0");
  for (const auto& p : psi_) {
    if (!(p.grid() == plan_.grid())) throw PreconditionError("evolution: psi on a different grid");
    if (!p.all_finite()) throw PreconditionError("evolution: psi must be finite");
  }
  substeps_.resize(intervals());
  for (std::size_t k = 0; k < intervals(); ++k) {
    const double dt = times_[k + 1] - times_[k];
    if (!(dt > 0.0)) throw PreconditionError("evolution: time grid must be increasing");
    const double bound = std::max(psi_[k].sup_norm(), psi_[k + 1].sup_norm());
    substeps_[k] = std::max(1, int(std::ceil(dt * bound / max_decay)));
  }
}

Field EvolutionOperator::step(const Field& f, std::size_t k) const {
  if (k >= intervals()) throw PreconditionError("evolution: interval index out of range");
  const int r = substeps_[k];
  const double dt = (times_[k + 1] - times_[k]) / r;
  const auto& p0 = psi_[k].values();
  const auto& p1 = psi_[k + 1].values();
  Field g = f;
  auto half_decay = [&](Field& x, double frac) {
    auto xs = x.data();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double psi = (1.0 - frac) * p0[i] + frac * p1[i];
      xs[i] *= std::exp(-psi * dt / 2);
    }
  };
  for (int j = 0; j < r; ++j) {
    half_decay(g, double(j) / r);
    g = plan_.apply(g, dt);
    half_decay(g, double(j + 1) / r);
  }
  return g;
}

Field EvolutionOperator::apply(const Field& f, std::size_t s_index, std::size_t t_index) const {
  if (s_index > t_index || t_index >= times_.size()) {
    throw PreconditionError("evolution_apply: need s_index <= t_index < number of time nodes");
  }
  if (!f.all_finite()) throw PreconditionError("evolution_apply: field must be finite");
  Field g = f;
  for (std::size_t k = s_index; k < t_index; ++k) g = step(g, k);
  return g;
}

}  // namespace rdpp

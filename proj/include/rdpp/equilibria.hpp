#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rdpp/model.hpp"

namespace rdpp {

enum class Stability { stable, unstable, marginal };
std::string to_string(Stability s);

/// Real parts inside (-margin, margin) are classified marginal.
inline constexpr double kStabilityMargin = 1e-9;

using Spectrum = std::array<std::complex<double>, 3>;

struct ConstantState {
  Vec3 y{};
  std::string branch;  ///< "trivial", "prey-only", "prey-free", "interior"
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero();
  Spectrum eigenvalues{};  ///< sorted by decreasing real part
  double max_re = 0.0;
  Stability stability = Stability::marginal;
  double residual = 0.0;  ///< sup norm of the reaction at y
};

struct EquilibriumReport {
  std::vector<ConstantState> states;
  bool nontrivial_branches_available = true;  ///< false when rho = 0
};

/// Eigenvalues of a real 3x3 matrix, sorted by decreasing real part.
Spectrum eigenvalues(const Eigen::Matrix3d& m);
Stability classify(double max_re);

/// Linearization data of the ODE at y.
ConstantState analyse_state(const Params& p, const Vec3& y, std::string branch = {});

/// Coefficients (c0, c1, c2, c3) of the cubic c3 u^3 + c2 u^2 + c1 u + c0
/// whose roots in (0, 1] carry the interior states; requires rho > 0.
std::array<double, 4> interior_cubic(const Params& p);

/// Real roots of a cubic (coefficients low to high) from the companion
/// matrix eigenvalues, polished by Newton steps.
std::vector<double> cubic_real_roots(const std::array<double, 4>& c);

/// All constant stationary states with nonnegative components.
EquilibriumReport find_equilibria(const Params& p);

/// Largest eigenvalue real part of the tracked state along a one-parameter family.
using StabilityIndicator = std::function<double(double)>;

/// Bisection for the sign change of indicator on [lo, hi]; stops when the
/// bracket is shorter than tol. Throws NoSignChangeError.
double bisect_sign_change(const StabilityIndicator& indicator, double lo, double hi, double tol = 1e-7);

/// Critical h of the state y(h) of family(h), by bisection on max Re lambda.
double stability_bifurcation(const std::function<Params(double)>& family,
                             const std::function<Vec3(double)>& state, double h_lo, double h_hi,
                             double tol = 1e-7);

struct DispersionPoint {
  double q;
  double max_re;
};

struct DispersionScan {
  std::vector<DispersionPoint> points;
  double max_re_at_zero = 0.0;
  bool turing_positive = false;  ///< stable at q = 0, unstable at some q > 0
  bool bounded_by_zero_mode = true;  ///< max_re(q) <= max_re(0) + margin for all q
};

/// max Re lambda of J - q^2 diag(1, d, 0) on n_q equispaced q in [0, q_max].
DispersionScan dispersion_scan(const Params& p, const Vec3& state, double q_max, int n_q);

/// CSV `u,v,w,re_l1,im_l1,re_l2,im_l2,re_l3,im_l3,class`.
void write_equilibria_csv(std::ostream& os, const EquilibriumReport& r);
/// CSV `q,max_re`.
void write_dispersion_csv(std::ostream& os, const DispersionScan& s);

}  // namespace rdpp

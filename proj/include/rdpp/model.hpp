#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

namespace rdpp {

using Vec3 = std::array<double, 3>;

/// Constants of the normalized prey / active predator / dormant predator
/// system. Prey diffusion, carrying capacity, prey growth and predator
/// crowding are all scaled to one and are not stored.
struct Params {
  double d = 1.0;      ///< active predator diffusion, > 0
  double h = 1.0;      ///< half-saturation constant, > 0
  double gamma = 0.0;  ///< predation loss of prey
  double alpha = 0.0;  ///< awakening rate
  double theta = 0.0;  ///< sleeping rate
  double m = 0.0;      ///< sleeping + active mortality
  double rho = 0.0;    ///< awakening + dormant mortality
  double mu = 0.0;     ///< active predator growth
  double nu = 0.0;     ///< dormant predator growth
  /// m >= theta and rho >= alpha (nonnegative mortalities). E2 turns this
  /// off: its m = theta/2 means a negative active mortality.
  bool mortality_relations = true;

  /// Throws PreconditionError when d <= 0, h <= 0, any other constant is
  /// negative or non-finite, or (with mortality_relations) m < theta or
  /// rho < alpha.
  void validate() const;

  /// mu = nu = gamma/2, m = theta = 0, alpha = rho = 1/4, gamma = h + 1/2.
  static Params e1(double h, double d = 1.0);
  /// mu = 3 gamma/4, nu = gamma/2, m = 1/8, theta = 1/4, alpha = 1/4,
  /// rho = 1/2, gamma = h + 1/2.
  static Params e2(double h, double d = 1.0);
};

/// Threshold values of the invariant boxes and of the comparison bounds.
/// A value is absent when its formula is undefined for the given constants
/// (division by rho = 0, negative discriminant) or its positivity
/// requirement fails.
struct Thresholds {
  std::optional<double> v_bar;
  std::optional<double> w_bar;
  std::optional<double> u_under;
  std::optional<double> v_under;
  std::optional<double> w_under;
  std::optional<double> v_flat;
  std::optional<double> w_flat;
  double kappa0 = 1.0;
  std::optional<double> v_tilde;
  std::optional<double> w_tilde;
};

Vec3 reaction(const Params& p, double u, double v, double w);
inline Vec3 reaction(const Params& p, const Vec3& y) { return reaction(p, y[0], y[1], y[2]); }

/// kappa0 is the sup of the initial prey density; it only enters v_tilde and
/// w_tilde.
Thresholds thresholds(const Params& p, double kappa0 = 1.0);

Eigen::Matrix3d jacobian(const Params& p, double u, double v, double w);
inline Eigen::Matrix3d jacobian(const Params& p, const Vec3& y) { return jacobian(p, y[0], y[1], y[2]); }

/// Row-sum bound of |J| over the box [0,upper[0]] x [0,upper[1]] x [0,upper[2]].
double reaction_lipschitz(const Params& p, const Vec3& upper);

/// Uniform bound max{1, kappa0, v_bar, v_tilde, |v0|, w_bar, w_tilde, |w0|};
/// absent thresholds are skipped.
double uniform_bound(const Params& p, double u0_sup, double v0_sup, double w0_sup);

}  // namespace rdpp

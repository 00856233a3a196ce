#include "rdpp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdpp/error.hpp"

namespace rdpp {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError("invalid parameters: " + what);
}

// a * num / den with the convention that a zero prefactor contributes zero
// even when den vanishes.
std::optional<double> scaled_ratio(double a, double num, double den) {
  if (a == 0.0) return 0.0;
  if (den == 0.0) return std::nullopt;
  return a * num / den;
}

}  // namespace

void Params::validate() const {
  const double all[] = {d, h, gamma, alpha, theta, m, rho, mu, nu};
  for (double x : all) require(std::isfinite(x), "non-finite constant");
  require(d > 0.0, "d must be > 0");
  require(h > 0.0, "h must be > 0");
  require(gamma >= 0.0 && alpha >= 0.0 && theta >= 0.0 && m >= 0.0 && rho >= 0.0 &&
              mu >= 0.0 && nu >= 0.0,
          "rate constants must be >= 0");
  if (!mortality_relations) return;
  require(m >= theta, "m = theta + mortality requires m >= theta");
  require(rho >= alpha, "rho = alpha + mortality requires rho >= alpha");
}

Params Params::e1(double h, double d) {
  Params p;
  p.d = d;
  p.h = h;
  p.gamma = h + 0.5;
  p.mu = p.gamma / 2;
  p.nu = p.gamma / 2;
  p.m = 0.0;
  p.theta = 0.0;
  p.alpha = 0.25;
  p.rho = 0.25;
  return p;
}

Params Params::e2(double h, double d) {
  Params p;
  p.d = d;
  p.h = h;
  p.gamma = h + 0.5;
  p.mu = 0.75 * p.gamma;
  p.nu = p.gamma / 2;
  p.m = 0.125;
  p.theta = 0.25;
  p.mortality_relations = false;
  p.alpha = 0.25;
  p.rho = 0.5;
  return p;
}

Vec3 reaction(const Params& p, double u, double v, double w) {
  if (!(u > -p.h)) throw DomainError("reaction: u <= -h is at or beyond the Holling pole");
  const double holling = u * v / (u + p.h);
  return {(1.0 - u) * u - p.gamma * holling,
          p.mu * holling + p.alpha * w - (p.m + v) * v,
          p.nu * holling + p.theta * v - p.rho * w};
}

Thresholds thresholds(const Params& p, double kappa0) {
  Thresholds t;
  t.kappa0 = kappa0;
  const double h = p.h;
  const double rho = p.rho;

  if (auto dorm = scaled_ratio(p.alpha, p.nu + p.theta + p.theta * h, rho + rho * h)) {
    t.v_bar = p.mu / (1.0 + h) + *dorm - p.m;
  }
  if (t.v_bar && rho > 0.0) {
    t.w_bar = (p.nu + p.theta + p.theta * h) * *t.v_bar / (rho + rho * h);
  }

  if (rho > 0.0) {
    t.v_flat = p.alpha * p.theta / rho - p.m;
    t.w_flat = p.theta * (p.alpha * p.theta - p.m * rho) / (rho * rho);
  }

  if (t.v_bar) {
    const double disc = (1.0 + h) * (1.0 + h) - 4.0 * p.gamma * *t.v_bar;
    if (disc >= 0.0) {
      const double uu = (1.0 - h) / 2.0 + std::sqrt(disc) / 2.0;
      if (uu > 0.0) t.u_under = uu;
    }
  }
  if (t.u_under && rho > 0.0) {
    const double uu = *t.u_under;
    const double vu = p.mu * uu / (uu + h) + p.alpha * p.nu * uu / (rho * uu + rho * h) +
                      p.alpha * p.theta / rho - p.m;
    if (vu > 0.0) {
      t.v_under = vu;
      const double wu = p.nu * uu * vu / (rho * uu + rho * h) + p.theta * vu / rho;
      if (wu > 0.0) t.w_under = wu;
    }
  }

  const double k0 = kappa0;
  if (auto dorm = scaled_ratio(p.alpha, p.nu * k0 + p.theta * k0 + p.theta * h, rho * k0 + rho * h)) {
    t.v_tilde = p.mu * k0 / (k0 + h) + *dorm - p.m;
  }
  if (t.v_tilde && rho > 0.0) {
    t.w_tilde = (p.nu * k0 + p.theta * k0 + p.theta * h) * *t.v_tilde / (rho * k0 + rho * h);
  }
  return t;
}

Eigen::Matrix3d jacobian(const Params& p, double u, double v, double w) {
  (void)w;  // the system is linear in w
  if (!(u > -p.h)) throw DomainError("jacobian: u <= -h is at or beyond the Holling pole");
  const double s = u + p.h;
  const double dsat = p.h * v / (s * s);  // d/du of u v/(u+h)
  const double sat = u / s;               // d/dv of u v/(u+h)
  Eigen::Matrix3d J;
  J << 1.0 - 2.0 * u - p.gamma * dsat, -p.gamma * sat, 0.0,
      p.mu * dsat, p.mu * sat - p.m - 2.0 * v, p.alpha,
      p.nu * dsat, p.nu * sat + p.theta, -p.rho;
  return J;
}

double reaction_lipschitz(const Params& p, const Vec3& upper) {
  const double U = std::max(upper[0], 0.0);
  const double V = std::max(upper[1], 0.0);
  // On the box: u/(u+h) <= 1 and h v/(u+h)^2 <= V/h.
  const double dsat = V / p.h;
  const double row_u = std::max(1.0, 2.0 * U - 1.0) + p.gamma * dsat + p.gamma;
  const double row_v = p.mu * dsat + p.mu + p.m + 2.0 * V + p.alpha;
  const double row_w = p.nu * dsat + p.nu + p.theta + p.rho;
  return std::max({row_u, row_v, row_w});
}

double uniform_bound(const Params& p, double u0_sup, double v0_sup, double w0_sup) {
  const Thresholds t = thresholds(p, u0_sup);
  double n = std::max({1.0, u0_sup, v0_sup, w0_sup});
  for (const auto& x : {t.v_bar, t.v_tilde, t.w_bar, t.w_tilde}) {
    if (x) n = std::max(n, *x);
  }
  return n;
}

}  // namespace rdpp

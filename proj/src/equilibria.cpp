#include "rdpp/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "rdpp/csv.hpp"
#include "rdpp/error.hpp"

namespace rdpp {

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "?";
}

Spectrum eigenvalues(const Eigen::Matrix3d& m) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericGuardError("eigenvalues: solver did not converge");
  Spectrum s;
  for (int i = 0; i < 3; ++i) s[i] = es.eigenvalues()[i];
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return s;
}

Stability classify(double max_re) {
  if (max_re < -kStabilityMargin) return Stability::stable;
  if (max_re > kStabilityMargin) return Stability::unstable;
  return Stability::marginal;
}

ConstantState analyse_state(const Params& p, const Vec3& y, std::string branch) {
  ConstantState s;
  s.y = y;
  s.branch = std::move(branch);
  s.jacobian = jacobian(p, y);
  s.eigenvalues = eigenvalues(s.jacobian);
  s.max_re = s.eigenvalues[0].real();
  s.stability = classify(s.max_re);
  const Vec3 f = reaction(p, y);
  s.residual = std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
  return s;
}

std::array<double, 4> interior_cubic(const Params& p) {
  if (!(p.rho > 0.0)) throw PreconditionError("interior_cubic: requires rho > 0");
  // rho (1-u)(u+h)^2 = gamma [(mu rho + alpha nu + alpha theta - m rho) u + (alpha theta - m rho) h]
  const double h = p.h, rho = p.rho;
  const double slope = p.mu * rho + p.alpha * p.nu + p.alpha * p.theta - p.m * rho;
  const double offset = (p.alpha * p.theta - p.m * rho) * h;
  return {rho * h * h - p.gamma * offset, rho * (2 * h - h * h) - p.gamma * slope, rho * (1 - 2 * h), -rho};
}

std::vector<double> cubic_real_roots(const std::array<double, 4>& c) {
  if (c[3] == 0.0) throw PreconditionError("cubic_real_roots: leading coefficient vanishes");
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  for (int i = 0; i < 3; ++i) comp(i, 2) = -c[i] / c[3];
  const Spectrum ev = eigenvalues(comp);

  auto poly = [&](double x) { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; };
  auto dpoly = [&](double x) { return (3 * c[3] * x + 2 * c[2]) * x + c[1]; };
  std::vector<double> roots;
  for (const auto& z : ev) {
    if (std::abs(z.imag()) >= 1e-10 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 3; ++it) {
      const double d = dpoly(x);
      if (d == 0.0) break;
      const double xn = x - poly(x) / d;
      if (!(std::abs(poly(xn)) < std::abs(poly(x)))) break;
      x = xn;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

EquilibriumReport find_equilibria(const Params& p) {
  p.validate();
  EquilibriumReport rep;
  rep.states.push_back(analyse_state(p, {0.0, 0.0, 0.0}, "trivial"));
  rep.states.push_back(analyse_state(p, {1.0, 0.0, 0.0}, "prey-only"));
  if (!(p.rho > 0.0)) {
    rep.nontrivial_branches_available = false;
    return rep;
  }
  const Thresholds th = thresholds(p);
  if (*th.v_flat > 0.0 && *th.w_flat >= 0.0) {
    rep.states.push_back(analyse_state(p, {0.0, *th.v_flat, *th.w_flat}, "prey-free"));
  }
  // v = g(u) on the interior branch.
  auto g = [&](double u) {
    const double sat = u / (u + p.h);
    return p.mu * sat + p.alpha / p.rho * (p.nu * sat + p.theta) - p.m;
  };
  for (double u : cubic_real_roots(interior_cubic(p))) {
    if (!(u > 0.0 && u <= 1.0 + 1e-12)) continue;
    u = std::min(u, 1.0);
    const double v = g(u);
    if (!(v > 0.0)) continue;
    const double w = (p.nu * u / (u + p.h) + p.theta) * v / p.rho;
    rep.states.push_back(analyse_state(p, {u, v, w}, "interior"));
  }
  return rep;
}

double bisect_sign_change(const StabilityIndicator& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw PreconditionError("bisection: need lo < hi");
  double flo = f(lo);
  const double fhi = f(hi);
  if (!((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0))) {
    throw NoSignChangeError("bisection: indicator has the same sign at both ends (" + csv::num(flo) + ", " +
                                csv::num(fhi) + ")",
                            flo, fhi);
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double stability_bifurcation(const std::function<Params(double)>& family,
                             const std::function<Vec3(double)>& state, double h_lo, double h_hi,
                             double tol) {
  return bisect_sign_change(
      [&](double h) {
        const Params p = family(h);
        return eigenvalues(jacobian(p, state(h)))[0].real();
      },
      h_lo, h_hi, tol);
}

DispersionScan dispersion_scan(const Params& p, const Vec3& state, double q_max, int n_q) {
  if (n_q < 2 || !(q_max >= 0.0)) throw PreconditionError("dispersion_scan: need n_q >= 2 and q_max >= 0");
  const Eigen::Matrix3d J = jacobian(p, state);
  DispersionScan scan;
  for (int i = 0; i < n_q; ++i) {
    const double q = q_max * i / (n_q - 1);
    Eigen::Matrix3d A = J;
    A(0, 0) -= q * q;
    A(1, 1) -= q * q * p.d;
    scan.points.push_back({q, eigenvalues(A)[0].real()});
  }
  scan.max_re_at_zero = scan.points.front().max_re;
  const bool stable0 = classify(scan.max_re_at_zero) == Stability::stable;
  for (const auto& pt : scan.points) {
    if (pt.q > 0.0 && stable0 && pt.max_re > kStabilityMargin) scan.turing_positive = true;
    if (pt.max_re > scan.max_re_at_zero + kStabilityMargin) scan.bounded_by_zero_mode = false;
  }
  return scan;
}

void write_equilibria_csv(std::ostream& os, const EquilibriumReport& r) {
  csv::Writer w(os, {"u", "v", "w", "re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3", "class"});
  for (const auto& s : r.states) {
    w.cell(s.y[0]).cell(s.y[1]).cell(s.y[2]);
    for (const auto& l : s.eigenvalues) w.cell(l.real()).cell(l.imag());
    w.cell(to_string(s.stability));
    w.end_row();
  }
}

void write_dispersion_csv(std::ostream& os, const DispersionScan& s) {
  csv::Writer w(os, {"q", "max_re"});
  for (const auto& pt : s.points) {
    w.cell(pt.q).cell(pt.max_re);
    w.end_row();
  }
}

}  // namespace rdpp

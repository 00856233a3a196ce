#include "rdpp/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdpp/error.hpp"

namespace rdpp {

namespace {

constexpr double kReactionCfl = 0.5;
constexpr double kClampRelative = 1e-12;

void check_finite_bounded(const State& s, double limit) {
  for (int c = 0; c < 3; ++c) {
    if (!s[c].all_finite()) throw NumericGuardError("stepper: non-finite value in component " + std::to_string(c));
    const double sup = s[c].max_value();
    if (sup > limit) {
      throw NumericGuardError("stepper: blow-up guard, component " + std::to_string(c) + " reached " +
                              std::to_string(sup) + " > " + std::to_string(limit));
    }
  }
}

}  // namespace

Stepper::Stepper(StepPlan plan)
    : plan_(std::move(plan)), prey_(plan_.grid, 1.0), predator_(plan_.grid, plan_.params.d) {
  plan_.params.validate();
  if (!(plan_.dt > 0.0)) throw PreconditionError("stepper: dt must be > 0");
}

State Stepper::react(const State& s, double dt, StepStats* stats) const {
  const Params& p = plan_.params;
  const Vec3 sup = s.sup();
  const double lip = reaction_lipschitz(p, {2 * sup[0] + 1, 2 * sup[1] + 1, 2 * sup[2] + 1});
  const int nsub = std::max(1, int(std::ceil(dt * lip / kReactionCfl)));
  const double h = dt / nsub;
  const double decay = std::exp(-p.rho * h);
  const double phi = p.rho > 0.0 ? -std::expm1(-p.rho * h) / p.rho : h;

  State out = s;
  auto us = out.u.data();
  auto vs = out.v.data();
  auto ws = out.w.data();
  for (std::size_t i = 0; i < us.size(); ++i) {
    double u = us[i], v = vs[i], w = ws[i];
    for (int j = 0; j < nsub; ++j) {
      const double hol0 = u * v / (u + p.h);
      const double fu0 = (1.0 - u) * u - p.gamma * hol0;
      const double fv0 = p.mu * hol0 + p.alpha * w - (p.m + v) * v;
      const double gw0 = p.nu * hol0 + p.theta * v;
      const double u1 = u + h * fu0;
      const double v1 = v + h * fv0;
      const double w1 = decay * w + phi * gw0;

      const double hol1 = u1 * v1 / (u1 + p.h);
      const double fu1 = (1.0 - u1) * u1 - p.gamma * hol1;
      const double fv1 = p.mu * hol1 + p.alpha * w1 - (p.m + v1) * v1;
      const double gw1 = p.nu * hol1 + p.theta * v1;
      u = 0.5 * u + 0.5 * (u1 + h * fu1);
      v = 0.5 * v + 0.5 * (v1 + h * fv1);
      w = decay * w + phi * 0.5 * (gw0 + gw1);
    }
    us[i] = u;
    vs[i] = v;
    ws[i] = w;
  }

  double clamp = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double scale = std::max(sup[c], out[c].max_value());
    for (double& x : out[c].data()) {
      if (x < 0.0) {
        if (-x > kClampRelative * scale) {
          throw NumericGuardError("stepper: negativity " + std::to_string(x) + " in component " +
                                  std::to_string(c) + " exceeds round-off");
        }
        clamp = std::max(clamp, -x);
        x = 0.0;
      }
    }
  }
  if (stats) {
    stats->clamp = std::max(stats->clamp, clamp);
    stats->reaction_substeps = nsub;
  }
  return out;
}

State Stepper::step(const State& s, StepStats* stats) const { return advance(s, plan_.dt, stats); }

State Stepper::advance(const State& s, double dt, StepStats* stats) const {
  if (!(s.grid() == plan_.grid)) throw PreconditionError("step: state on a different grid");
  if (!s.nonnegative()) throw PreconditionError("step: state must be nonnegative");
  State x(prey_.apply(s.u, dt / 2), predator_.apply(s.v, dt / 2), s.w);
  x = react(x, dt, stats);
  x.u = prey_.apply(x.u, dt / 2);
  x.v = predator_.apply(x.v, dt / 2);
  check_finite_bounded(x, plan_.blowup_limit);
  return x;
}

SampleSummary summarize(double t, const State& s, const Observers& obs) {
  SampleSummary r;
  r.t = t;
  r.sup = s.sup();
  r.inf = s.inf();
  if (obs.box) r.in_box = box_membership(s, *obs.box, obs.box_tol);
  for (const auto& target : obs.targets) r.distances.push_back(sup_distance(s, target));
  r.grad_w = gradient_sup(s.w);
  return r;
}

Observation integrate(const StepPlan& plan_in, const State& s0, const Observers& obs) {
  if (!s0.nonnegative()) throw PreconditionError("integrate: initial state must be nonnegative");
  if (!(plan_in.horizon >= 0.0)) throw PreconditionError("integrate: horizon must be >= 0");
  if (obs.sample_every == 0) throw PreconditionError("integrate: sample_every must be >= 1");

  Observation out;
  const Vec3 sup0 = s0.sup();
  out.bound_N = uniform_bound(plan_in.params, sup0[0], sup0[1], sup0[2]);
  StepPlan plan = plan_in;
  plan.blowup_limit = std::min(plan.blowup_limit, 10.0 * out.bound_N);
  const Stepper stepper(plan);

  const double T = plan.horizon;
  const auto nsteps = std::size_t(std::max(0.0, std::ceil(T / plan.dt - 1e-9)));
  std::vector<double> pending = obs.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;

  auto record = [&](std::size_t k, double t, const State& s) {
    const bool sample = k % obs.sample_every == 0 || k == nsteps;
    if (sample) {
      out.samples.push_back(summarize(t, s, obs));
      if (obs.keep_states) out.states.push(t, s);
      if (obs.on_sample) obs.on_sample(t, s);
    }
    while (next_snapshot < pending.size() && pending[next_snapshot] <= t + 1e-12) {
      out.snapshots.push(t, s);
      ++next_snapshot;
    }
  };

  State s = s0;
  record(0, 0.0, s);
  for (std::size_t k = 1; k <= nsteps; ++k) {
    const double t_prev = double(k - 1) * plan.dt;
    const double t = k == nsteps ? T : double(k) * plan.dt;
    StepStats stats;
    s = stepper.advance(s, t - t_prev, &stats);
    out.max_clamp = std::max(out.max_clamp, stats.clamp);
    record(k, t, s);
  }
  return out;
}

OdeSolution ode_solve(const Params& p, const Vec3& y0, double T, double dt) {
  p.validate();
  for (double x : y0) {
    if (!(x >= 0.0)) throw PreconditionError("ode_solve: initial value must be nonnegative");
  }
  if (!(T >= 0.0) || !(dt > 0.0)) throw PreconditionError("ode_solve: need T >= 0 and dt > 0");
  const double limit = 10.0 * uniform_bound(p, y0[0], y0[1], y0[2]);
  const auto n = std::size_t(std::max(1.0, std::ceil(T / dt - 1e-9)));
  const double h = T / double(n);

  auto axpy = [](const Vec3& y, double a, const Vec3& k) {
    return Vec3{y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]};
  };
  OdeSolution sol;
  sol.times.reserve(n + 1);
  sol.values.reserve(n + 1);
  Vec3 y = y0;
  sol.times.push_back(0.0);
  sol.values.push_back(y);
  for (std::size_t k = 1; k <= n; ++k) {
    const Vec3 k1 = reaction(p, y);
    const Vec3 k2 = reaction(p, axpy(y, h / 2, k1));
    const Vec3 k3 = reaction(p, axpy(y, h / 2, k2));
    const Vec3 k4 = reaction(p, axpy(y, h, k3));
    for (int c = 0; c < 3; ++c) y[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    for (double x : y) {
      if (!std::isfinite(x) || x > limit) throw NumericGuardError("ode_solve: blow-up guard tripped");
    }
    sol.times.push_back(k == n ? T : double(k) * h);
    sol.values.push_back(y);
  }
  return sol;
}

double kappa_closed(double kappa0, double t) {
  const double e = std::exp(-t);
  return kappa0 / (kappa0 + e - kappa0 * e);
}

double omega_closed(double v_tilde, double omega0, double t) {
  if (v_tilde == 0.0) return omega0 / (1.0 + omega0 * t);
  return v_tilde * omega0 / (omega0 + (v_tilde - omega0) * std::exp(-v_tilde * t));
}

ComparisonReport comparison_check(const std::vector<SampleSummary>& samples, const Params& p,
                                  double kappa0, double omega0, double tol) {
  ComparisonReport rep;
  const Thresholds th = thresholds(p, kappa0);
  for (const auto& s : samples) {
    const double kb = kappa_closed(kappa0, s.t);
    const double ue = s.sup[0] - kb;
    rep.max_u_excess = std::max(rep.max_u_excess, ue);
    if (ue > tol) rep.violations.push_back({s.t, 0, s.sup[0], kb});
    if (th.v_tilde) {
      const double vt = *th.v_tilde;
      const double vb = omega0 > vt ? omega_closed(vt, omega0, s.t) : vt;
      const double ve = s.sup[1] - vb;
      rep.max_v_excess = std::max(rep.max_v_excess, ve);
      if (ve > tol) rep.violations.push_back({s.t, 1, s.sup[1], vb});
    }
  }
  return rep;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw PreconditionError("trajectory_distance: different time grids");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, sup_distance(a.states[k], b.states[k]));
  return d;
}

}  // namespace rdpp

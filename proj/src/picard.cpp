#include "rdpp/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "rdpp/csv.hpp"
#include "rdpp/error.hpp"
#include "rdpp/parallel.hpp"
#include "rdpp/semigroup.hpp"

namespace rdpp {

namespace {

template <typename F>
Field pointwise(const State& s, F&& f) {
  Field out(s.grid());
  auto u = s.u.values();
  auto v = s.v.values();
  auto w = s.w.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(u[i], v[i], w[i]);
  return out;
}

void axpy(Field& y, double a, const Field& x) {
  auto ys = y.data();
  auto xs = x.values();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] += a * xs[i];
}

// x_{k+1} = U_k [x_k + dt_k/2 f_k] + dt_k/2 f_{k+1}, x_0 = x0: the trapezoid
// rule for U(t_k,0) x0 + int_0^{t_k} U(t_k,s) f(s) ds, using
// U(t_{k+1}, s) = U(t_{k+1}, t_k) U(t_k, s).
template <typename Step>
std::vector<Field> duhamel(const std::vector<double>& times, const Field& x0,
                           const std::vector<Field>& source, Step&& step) {
  std::vector<Field> x;
  x.reserve(times.size());
  x.push_back(x0);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double half = (times[k + 1] - times[k]) / 2;
    Field y = x[k];
    axpy(y, half, source[k]);
    y = step(y, k);
    axpy(y, half, source[k + 1]);
    x.push_back(std::move(y));
  }
  return x;
}

double sup_of_state(const State& s) {
  const Vec3 a = s.sup();
  return std::max({a[0], a[1], a[2], 0.0});
}

}  // namespace

std::vector<double> IterateHistory::distances() const {
  std::vector<double> d;
  for (const auto& r : records) {
    if (r.iter > 1) d.push_back(r.distance);
  }
  return d;
}

std::vector<double> uniform_times(double T, int K) {
  if (!(T > 0.0) || K < 1) throw PreconditionError("time grid: need T > 0 and K >= 1");
  std::vector<double> t(K + 1);
  for (int k = 0; k <= K; ++k) t[k] = T * k / K;
  return t;
}

Trajectory first_iterate(const State& s0, const Params& p, const std::vector<double>& times) {
  p.validate();
  if (!s0.nonnegative()) throw PreconditionError("first_iterate: initial state must be nonnegative");
  const SemigroupPlan prey(s0.grid(), 1.0);
  const SemigroupPlan pred(s0.grid(), p.d);
  Trajectory tr;
  for (double t : times) {
    tr.push(t, State(prey.apply(s0.u, t), decay_apply(pred.apply(s0.v, t), p.m, t), decay_apply(s0.w, p.rho, t)));
  }
  return tr;
}

Trajectory next_iterate(const Trajectory& prev, const State& s0, const Params& p, double max_decay) {
  p.validate();
  if (prev.size() < 2) throw PreconditionError("next_iterate: need at least two time nodes");
  for (std::size_t k = 0; k < prev.size(); ++k) {
    if (!prev.states[k].nonnegative()) {
      throw PreconditionError("next_iterate: negativity in previous iterate at t = " +
                              std::to_string(prev.times[k]));
    }
  }
  const Grid& g = s0.grid();
  const std::size_t nt = prev.size();
  std::vector<Field> psi_u, src_u, psi_v, src_v, src_w;
  for (const State& s : prev.states) {
    psi_u.push_back(pointwise(s, [&](double u, double v, double) { return u + p.gamma * v / (u + p.h); }));
    src_u.push_back(s.u);
    psi_v.push_back(pointwise(s, [&](double, double v, double) { return p.m + v; }));
    src_v.push_back(pointwise(s, [&](double u, double v, double w) { return p.mu * u * v / (u + p.h) + p.alpha * w; }));
    src_w.push_back(pointwise(s, [&](double u, double v, double) { return p.nu * u * v / (u + p.h) + p.theta * v; }));
  }

  std::vector<Field> u, v, w;
  parallel_for(3, [&](std::size_t c) {
    if (c == 0) {
      const EvolutionOperator op(SemigroupPlan(g, 1.0), prev.times, std::move(psi_u), max_decay);
      u = duhamel(prev.times, s0.u, src_u, [&](const Field& f, std::size_t k) { return op.step(f, k); });
    } else if (c == 1) {
      const EvolutionOperator op(SemigroupPlan(g, p.d), prev.times, std::move(psi_v), max_decay);
      v = duhamel(prev.times, s0.v, src_v, [&](const Field& f, std::size_t k) { return op.step(f, k); });
    } else {
      w = duhamel(prev.times, s0.w, src_w, [&](const Field& f, std::size_t k) {
        return decay_apply(f, p.rho, prev.times[k + 1] - prev.times[k]);
      });
    }
  });

  Trajectory out;
  for (std::size_t k = 0; k < nt; ++k) out.push(prev.times[k], State(std::move(u[k]), std::move(v[k]), std::move(w[k])));
  return out;
}

namespace {

IterateRecord make_record(int iter, const Trajectory& cur, const Trajectory* prev) {
  IterateRecord r;
  r.iter = iter;
  for (const auto& s : cur.states) r.sup.push_back(s.sup());
  if (prev) {
    r.distance = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      r.dist_prev.push_back(sup_distance(cur.states[k], prev->states[k]));
      r.distance = std::max(r.distance, r.dist_prev.back());
    }
  } else {
    r.distance = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void check_bounds(const Trajectory& tr, double bound, int iter) {
  const double slack = 1e-12 * std::max(1.0, bound);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const State& s = tr.states[k];
    if (!s.nonnegative()) {
      throw NumericGuardError("picard: iterate " + std::to_string(iter) + " negative at t = " +
                              std::to_string(tr.times[k]));
    }
    if (sup_of_state(s) > bound + slack) {
      throw NumericGuardError("picard: iterate " + std::to_string(iter) + " exceeds 2M = " +
                              std::to_string(bound) + " at t = " + std::to_string(tr.times[k]));
    }
  }
}

}  // namespace

PicardResult solve(const State& s0, const Params& p, const PicardOptions& opts) {
  p.validate();
  if (!s0.nonnegative()) throw PreconditionError("picard: initial state must be nonnegative");
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw PreconditionError("picard: need tol > 0 and max_iter >= 1");
  const double M = sup_of_state(s0);
  const double horizon = opts.horizon_constant / (std::pow(M, 4) + 1.0);
  if (!(opts.T0 > 0.0) || opts.T0 > horizon) {
    throw PreconditionError("picard: T0 = " + std::to_string(opts.T0) + " must lie in (0, c/(M^4+1)] = (0, " +
                            std::to_string(horizon) + "]");
  }

  PicardResult res;
  IterateHistory& h = res.history;
  h.times = uniform_times(opts.T0, opts.K);
  h.M = M;
  h.bound = 2.0 * M;

  Trajectory cur = first_iterate(s0, p, h.times);
  check_bounds(cur, h.bound, 1);
  h.records.push_back(make_record(1, cur, nullptr));
  if (opts.keep_iterates) h.iterates.push_back(cur);

  for (int iter = 2; iter <= opts.max_iter + 1; ++iter) {
    Trajectory next = next_iterate(cur, s0, p, opts.max_decay);
    check_bounds(next, h.bound, iter);
    h.records.push_back(make_record(iter, next, &cur));
    if (opts.keep_iterates) h.iterates.push_back(next);
    cur = std::move(next);
    if (h.records.back().distance < opts.tol) {
      h.converged = true;
      break;
    }
  }
  if (!h.converged) {
    throw ConvergenceError("picard: no convergence within " + std::to_string(opts.max_iter) + " iterations",
                           h.distances());
  }
  res.limit = std::move(cur);
  return res;
}

GlobalPicard solve_global(const State& s0, const Params& p, double T, const PicardOptions& opts,
                          double window_dt) {
  if (!(T > 0.0) || !(window_dt > 0.0)) throw PreconditionError("picard: need T > 0 and window_dt > 0");
  GlobalPicard out;
  State s = s0;
  double t0 = 0.0;
  out.trajectory.push(0.0, s0);
  while (t0 < T * (1 - 1e-12)) {
    const double M = sup_of_state(s);
    const double len = std::min({opts.T0, opts.horizon_constant / (std::pow(M, 4) + 1.0), T - t0});
    PicardOptions w = opts;
    w.T0 = len;
    w.K = std::max(1, int(std::ceil(len / window_dt - 1e-9)));
    w.keep_iterates = false;
    PicardResult r = solve(s, p, w);
    out.window_starts.push_back(t0);
    out.iterations.push_back(int(r.history.records.size()) - 1);
    for (std::size_t k = 1; k < r.limit.size(); ++k) out.trajectory.push(t0 + r.limit.times[k], r.limit.states[k]);
    s = r.limit.states.back();
    t0 += len;
  }
  return out;
}

double mild_residual(const Trajectory& traj, const Params& p) {
  if (traj.size() < 2) return 0.0;
  const Grid& g = traj.states.front().grid();
  const SemigroupPlan prey(g, 1.0);
  const SemigroupPlan pred(g, p.d);
  std::vector<Field> fu, fv, fw;
  for (const State& s : traj.states) {
    fu.push_back(pointwise(s, [&](double u, double v, double) { return (1 - u) * u - p.gamma * u * v / (u + p.h); }));
    fv.push_back(pointwise(s, [&](double u, double v, double w) {
      return p.mu * u * v / (u + p.h) + p.alpha * w - (p.m + v) * v;
    }));
    fw.push_back(pointwise(s, [&](double u, double v, double) { return p.nu * u * v / (u + p.h) + p.theta * v; }));
  }
  const auto& t = traj.times;
  auto dt = [&](std::size_t k) { return t[k + 1] - t[k]; };
  const State& s0 = traj.states.front();
  auto u = duhamel(t, s0.u, fu, [&](const Field& f, std::size_t k) { return prey.apply(f, dt(k)); });
  auto v = duhamel(t, s0.v, fv, [&](const Field& f, std::size_t k) { return pred.apply(f, dt(k)); });
  auto w = duhamel(t, s0.w, fw, [&](const Field& f, std::size_t k) { return decay_apply(f, p.rho, dt(k)); });
  double r = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    r = std::max(r, sup_distance(traj.states[k], State(std::move(u[k]), std::move(v[k]), std::move(w[k]))));
  }
  return r;
}

void write_history_csv(std::ostream& os, const IterateHistory& h) {
  csv::Writer w(os, {"iter", "t", "sup_u", "sup_v", "sup_w", "dist_prev"});
  for (const auto& r : h.records) {
    for (std::size_t k = 0; k < h.times.size(); ++k) {
      w.cell(r.iter).cell(h.times[k]).cell(r.sup[k][0]).cell(r.sup[k][1]).cell(r.sup[k][2]);
      w.cell(r.dist_prev.empty() ? std::optional<double>() : std::optional<double>(r.dist_prev[k]));
      w.end_row();
    }
  }
}

}  // namespace rdpp

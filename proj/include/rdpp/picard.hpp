#pragma once

#include <iosfwd>
#include <vector>

#include "rdpp/grid.hpp"
#include "rdpp/model.hpp"
#include "rdpp/trajectory.hpp"

namespace rdpp {

// Successive approximation of the mild solution in which the iterate l+1
// solves the linear problems
//   u' = Lap u   - (u_l + gamma v_l/(u_l + h)) u + u_l
//   v' = d Lap v - (m + v_l) v + mu u_l v_l/(u_l + h) + alpha w_l
//   w' =         - rho w       + nu u_l v_l/(u_l + h) + theta v_l
// through evolution operators, so every iterate stays nonnegative.

struct PicardOptions {
  double T0 = 0.5;
  int K = 50;                       ///< time subintervals on [0, T0]
  double tol = 1e-8;                ///< on the max-over-time sup distance
  int max_iter = 60;
  double horizon_constant = 20.0;   ///< requires T0 <= c / (M^4 + 1)
  double max_decay = 0.1;           ///< substep bound dt * sup psi
  bool keep_iterates = true;
};

struct IterateRecord {
  int iter = 0;                   ///< 1 for the starting iterate
  std::vector<Vec3> sup;          ///< per time node
  std::vector<double> dist_prev;  ///< per time node; empty for iter 1
  double distance = 0.0;          ///< max of dist_prev; NaN for iter 1
};

struct IterateHistory {
  std::vector<double> times;
  std::vector<IterateRecord> records;
  std::vector<Trajectory> iterates;  ///< only with keep_iterates
  double M = 0.0;
  double bound = 0.0;  ///< 2M
  bool converged = false;

  std::vector<double> distances() const;
};

struct PicardResult {
  Trajectory limit;
  IterateHistory history;
};

std::vector<double> uniform_times(double T, int K);

/// u_1 = e^{t Lap} u0, v_1 = e^{-m t} e^{d t Lap} v0, w_1 = e^{-rho t} w0.
Trajectory first_iterate(const State& s0, const Params& p, const std::vector<double>& times);

/// Duhamel integrals by composite trapezoid on the shared time grid.
Trajectory next_iterate(const Trajectory& prev, const State& s0, const Params& p,
                        double max_decay = 0.1);

/// Iterates until the sup distance between successive iterates drops below
/// tol. Throws ConvergenceError after max_iter iterations and
/// NumericGuardError when an iterate leaves [0, 2M].
PicardResult solve(const State& s0, const Params& p, const PicardOptions& opts);

struct GlobalPicard {
  Trajectory trajectory;
  std::vector<double> window_starts;
  std::vector<int> iterations;
};

/// Restarts solve() from the final state of each window until T; each
/// window recomputes M and uses length min(T0, c/(M^4+1), remaining) with time
/// step at most window_dt.
GlobalPicard solve_global(const State& s0, const Params& p, double T, const PicardOptions& opts,
                          double window_dt = 0.01);

/// Largest deviation of a trajectory from the trapezoid discretization of
/// the standard heat-semigroup Duhamel equations, evaluated on its own grid.
double mild_residual(const Trajectory& traj, const Params& p);

/// CSV `iter,t,sup_u,sup_v,sup_w,dist_prev`.
void write_history_csv(std::ostream& os, const IterateHistory& h);

}  // namespace rdpp

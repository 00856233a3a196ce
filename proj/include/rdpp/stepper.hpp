#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "rdpp/grid.hpp"
#include "rdpp/model.hpp"
#include "rdpp/semigroup.hpp"
#include "rdpp/trajectory.hpp"

namespace rdpp {

struct StepPlan {
  Params params;
  Grid grid;
  double dt = 0.01;
  double horizon = 1.0;
  /// step() aborts when a component exceeds this; integrate() sets it to
  /// ten times the uniform bound of the initial data.
  double blowup_limit = std::numeric_limits<double>::infinity();
};

struct StepStats {
  double clamp = 0.0;   ///< largest negative value set to zero
  int reaction_substeps = 1;
};

/// Second-order Strang splitting: half exact diffusion, full reaction step,
/// half exact diffusion. The reaction step uses SSP-RK2 for u and v and an
/// exponential trapezoid rule for w (exact exp(-rho dt) on the linear part),
/// subcycled so dt_sub * L <= 0.5 with L a Lipschitz bound of the reaction
/// on the current solution box.
class Stepper {
 public:
  explicit Stepper(StepPlan plan);

  const StepPlan& plan() const { return plan_; }
  State step(const State& s, StepStats* stats = nullptr) const;
  /// One splitting step of length dt (step() uses plan().dt).
  State advance(const State& s, double dt, StepStats* stats = nullptr) const;
  /// The pointwise reaction sub-flow over dt (no diffusion).
  State react(const State& s, double dt, StepStats* stats = nullptr) const;

 private:
  StepPlan plan_;
  SemigroupPlan prey_;
  SemigroupPlan predator_;
};

/// What integrate() records at sample times.
struct Observers {
  std::size_t sample_every = 1;  ///< in steps
  std::optional<Box> box;
  double box_tol = 0.0;
  std::vector<Vec3> targets;
  bool keep_states = false;
  std::vector<double> snapshot_times;  ///< states kept at the nearest step
  std::function<void(double, const State&)> on_sample;
};

struct Observation {
  std::vector<SampleSummary> samples;
  Trajectory states;     ///< sampled states when keep_states
  Trajectory snapshots;  ///< states at snapshot_times
  double max_clamp = 0.0;
  double bound_N = 0.0;  ///< uniform bound of the initial data
};

/// Steps from s0 over [0, plan.horizon] with a fixed dt (the last step is
/// shortened to land on the horizon).
Observation integrate(const StepPlan& plan, const State& s0, const Observers& observers);

SampleSummary summarize(double t, const State& s, const Observers& observers);

struct OdeSolution {
  std::vector<double> times;
  std::vector<Vec3> values;
};

/// Classical RK4 for the spatially constant system y' = reaction(p, y).
OdeSolution ode_solve(const Params& p, const Vec3& y0, double T, double dt);

/// Logistic comparison solution kappa(t) = k0 / (k0 + e^{-t} - k0 e^{-t}).
double kappa_closed(double kappa0, double t);
/// Solution of w' = (v_tilde - w) w with w(0) = w0.
double omega_closed(double v_tilde, double omega0, double t);

struct ComparisonViolation {
  double t;
  int component;  ///< 0 prey, 1 active predator
  double value;
  double bound;
};

struct ComparisonReport {
  std::vector<ComparisonViolation> violations;
  double max_u_excess = -std::numeric_limits<double>::infinity();
  double max_v_excess = -std::numeric_limits<double>::infinity();
  bool u_ok() const { return max_u_excess <= 0.0; }
  bool v_ok() const { return max_v_excess <= 0.0; }
};

/// Checks sup u(t) <= kappa(t) + tol and sup v(t) <= omega(t) + tol on the
/// sampled summaries; omega starts at omega0 (the sup of v0) and is replaced
/// by v_tilde when omega0 <= v_tilde.
ComparisonReport comparison_check(const std::vector<SampleSummary>& samples, const Params& p,
                                  double kappa0, double omega0, double tol);

}  // namespace rdpp

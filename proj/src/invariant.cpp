#include "rdpp/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rdpp/csv.hpp"
#include "rdpp/error.hpp"
#include "rdpp/parallel.hpp"
#include "rdpp/stepper.hpp"

namespace rdpp {

namespace {

const char* component_name(int c) { return c == 0 ? "u" : (c == 1 ? "v" : "w"); }

StepPlan plan_for(const Params& p, const RunSettings& run) {
  StepPlan plan;
  plan.params = p;
  plan.grid = run.grid;
  plan.dt = run.dt;
  plan.horizon = run.T;
  return plan;
}

struct Exit {
  int component;
  std::size_t node;
};

std::optional<Exit> find_exit(const State& s, const Box& b, double tol) {
  for (int c = 0; c < 3; ++c) {
    auto xs = s[c].values();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(xs[i] >= b.lo[c] - tol && xs[i] <= b.hi[c] + tol)) return Exit{c, i};
    }
  }
  return std::nullopt;
}

// Last sample with excess >= 0, then linear interpolation to the next one.
// Returns nullopt when the final sample is still outside.
std::optional<double> entry_time(const std::vector<double>& t, const std::vector<double>& excess) {
  std::optional<std::size_t> last;
  for (std::size_t k = 0; k < excess.size(); ++k) {
    if (excess[k] >= 0.0) last = k;
  }
  if (!last) return 0.0;
  if (*last + 1 >= excess.size()) return std::nullopt;
  const std::size_t k = *last;
  const double e0 = excess[k], e1 = excess[k + 1];
  return t[k] + (t[k + 1] - t[k]) * e0 / (e0 - e1);
}

}  // namespace

RegionKind parse_region_kind(const std::string& name) {
  if (name == "R") return RegionKind::R;
  if (name == "R_natural") return RegionKind::R_natural;
  if (name == "custom") return RegionKind::custom;
  throw PreconditionError("unknown region kind '" + name + "'");
}

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::R: return "R";
    case RegionKind::R_natural: return "R_natural";
    case RegionKind::custom: return "custom";
  }
  return "?";
}

RegionSpec RegionSpec::from_thresholds(RegionKind kind, const Thresholds& th, double tol) {
  RegionSpec r;
  r.kind = kind;
  r.tol = tol;
  if (kind == RegionKind::custom) throw PreconditionError("region: custom boxes are built with RegionSpec::custom");
  if (!th.v_bar || !(*th.v_bar > 0.0) || !th.w_bar) {
    throw PreconditionError("region: R needs v_bar > 0 (and rho > 0 for w_bar)");
  }
  if (kind == RegionKind::R) {
    r.box = {{0.0, 0.0, 0.0}, {1.0, *th.v_bar, *th.w_bar}};
  } else {
    if (!th.u_under || !th.v_under || !th.w_under) {
      throw PreconditionError("region: R_natural needs u_, v_ and w_ to exist and be positive");
    }
    r.box = {{*th.u_under, *th.v_under, *th.w_under}, {1.0, *th.v_bar, *th.w_bar}};
  }
  return r;
}

RegionSpec RegionSpec::custom(const Box& box, double tol) {
  for (int c = 0; c < 3; ++c) {
    if (!(box.lo[c] <= box.hi[c])) throw PreconditionError("region: custom box needs lo <= hi");
  }
  RegionSpec r;
  r.kind = RegionKind::custom;
  r.box = box;
  r.tol = tol;
  return r;
}

bool Verdict::pass() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.pass; });
}

std::size_t Verdict::exits() const {
  return std::size_t(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.first_exit_t.has_value(); }));
}

Verdict check_invariance_from(const Params& p, const RegionSpec& region, const RunSettings& run,
                              const std::vector<State>& initial) {
  Verdict v;
  v.samples.resize(initial.size());
  const StepPlan plan = plan_for(p, run);
  parallel_for(initial.size(), [&](std::size_t i) {
    SampleVerdict& sv = v.samples[i];
    sv.sample = int(i);
    Observers obs;
    obs.sample_every = run.sample_every;
    obs.on_sample = [&](double t, const State& s) {
      if (sv.first_exit_t) return;
      if (auto e = find_exit(s, region.box, region.tol)) {
        sv.pass = false;
        sv.first_exit_t = t;
        sv.component = e->component;
        sv.node = e->node;
      }
    };
    integrate(plan, initial[i], obs);
  });
  return v;
}

Verdict check_invariance(const Params& p, const RegionSpec& region, const RunSettings& run, int n_samples,
                         std::uint64_t seed) {
  if (n_samples < 1) throw PreconditionError("check_invariance: need at least one sample");
  std::vector<State> initial;
  for (int i = 0; i < n_samples; ++i) {
    InitSpec spec;
    spec.kind = InitKind::box_random;
    spec.seed = seed + std::uint64_t(i);
    spec.box = region.box;
    initial.push_back(initial_data(spec, run.grid));
  }
  Verdict v = check_invariance_from(p, region, run, initial);
  for (int i = 0; i < n_samples; ++i) v.samples[i].seed = seed + std::uint64_t(i);
  return v;
}

Verdict measure_absorption(const Params& p, const State& s0, double eps, const RunSettings& run) {
  if (!(eps > 0.0)) throw PreconditionError("measure_absorption: eps must be > 0");
  const Thresholds th = thresholds(p);
  if (!th.v_bar || !(*th.v_bar > 0.0) || !th.w_bar) throw PreconditionError("measure_absorption: needs v_bar > 0");
  const Vec3 hi{1.0 + eps, *th.v_bar + eps, *th.w_bar + eps};

  Observers obs;
  obs.sample_every = run.sample_every;
  const Observation o = integrate(plan_for(p, run), s0, obs);
  std::vector<double> t, excess;
  for (const auto& s : o.samples) {
    t.push_back(s.t);
    double e = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < 3; ++c) e = std::max(e, s.sup[c] - hi[c]);  // nonnegativity is kept by the scheme
    excess.push_back(e);
  }
  SampleVerdict sv;
  sv.t_eps = entry_time(t, excess);
  sv.pass = sv.t_eps.has_value();
  sv.final_distance = std::max(0.0, excess.back());
  Verdict v;
  v.samples.push_back(sv);
  return v;
}

Verdict check_lower_region(const Params& p, const State& s0, double c_under, double eps, const RunSettings& run) {
  const Thresholds th = thresholds(p);
  if (!th.u_under || !th.v_under || !th.w_under || !th.v_bar || !th.w_bar) {
    throw PreconditionError("check_lower_region: u_, v_ and w_ must all exist and be positive");
  }
  if (!(c_under > 0.0)) throw PreconditionError("check_lower_region: c_ must be > 0");
  const Vec3 inf0 = s0.inf();
  for (int c = 0; c < 3; ++c) {
    if (!(inf0[c] >= c_under)) {
      throw PreconditionError(std::string("check_lower_region: inf of ") + component_name(c) + "0 is below c_");
    }
  }
  if (!(eps > 0.0)) throw PreconditionError("check_lower_region: eps must be > 0");
  const RegionSpec natural = RegionSpec::from_thresholds(RegionKind::R_natural, th);
  const Box open{{natural.box.lo[0] - eps, natural.box.lo[1] - eps, natural.box.lo[2] - eps},
                 {natural.box.hi[0] + eps, natural.box.hi[1] + eps, natural.box.hi[2] + eps}};
  const bool starts_inside = box_membership(s0, natural.box, natural.tol);

  SampleVerdict sv;
  Observers obs;
  obs.sample_every = run.sample_every;
  obs.on_sample = [&](double t, const State& s) {
    if (!starts_inside || sv.first_exit_t) return;
    if (auto e = find_exit(s, natural.box, natural.tol)) {
      sv.first_exit_t = t;
      sv.component = e->component;
      sv.node = e->node;
    }
  };
  const Observation o = integrate(plan_for(p, run), s0, obs);
  std::vector<double> t, excess;
  for (const auto& s : o.samples) {
    t.push_back(s.t);
    double e = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < 3; ++c) e = std::max({e, s.sup[c] - open.hi[c], open.lo[c] - s.inf[c]});
    excess.push_back(e);
  }
  sv.t_eps = entry_time(t, excess);
  sv.pass = sv.t_eps.has_value() && !sv.first_exit_t;
  sv.final_distance = std::max(0.0, excess.back());
  Verdict v;
  v.samples.push_back(sv);
  return v;
}

Verdict measure_convergence(const Params& p, const State& s0, const Vec3& target, double threshold,
                            const RunSettings& run) {
  Observers obs;
  obs.sample_every = run.sample_every;
  obs.targets = {target};
  const Observation o = integrate(plan_for(p, run), s0, obs);
  SampleVerdict sv;
  sv.final_distance = o.samples.back().distances.front();
  sv.pass = sv.final_distance < threshold;
  Verdict v;
  v.target = target;
  v.samples.push_back(sv);
  return v;
}

std::vector<Params> lower_region_scan(const Params& base, const std::vector<double>& gammas,
                                      const std::vector<double>& mus) {
  std::vector<Params> out;
  for (double g : gammas) {
    for (double mu : mus) {
      Params p = base;
      p.gamma = g;
      p.mu = mu;
      const Thresholds th = thresholds(p);
      if (th.v_bar && *th.v_bar > 0.0 && th.u_under && th.v_under && th.w_under) out.push_back(p);
    }
  }
  return out;
}

void write_verdict_csv(std::ostream& os, const Verdict& v) {
  csv::Writer w(os, {"sample", "seed", "pass", "first_exit_t", "component", "T_eps"});
  for (const auto& s : v.samples) {
    w.cell(s.sample).cell(static_cast<unsigned long long>(s.seed)).cell(s.pass).cell(s.first_exit_t);
    w.cell(s.component ? std::string_view(component_name(*s.component)) : std::string_view());
    w.cell(s.t_eps);
    w.end_row();
  }
}

}  // namespace rdpp

#include "rdpp/run.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rdpp/csv.hpp"
#include "rdpp/equilibria.hpp"
#include "rdpp/error.hpp"
#include "rdpp/invariant.hpp"
#include "rdpp/picard.hpp"
#include "rdpp/stepper.hpp"

namespace rdpp {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Collects emitted files so the manifest can hash them.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir_ / name).string());
    f << content;
    files_.push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }

  const fs::path& dir() const { return dir_; }
  const json& files() const { return files_; }

 private:
  fs::path dir_;
  json files_ = json::array();
};

RunSettings settings_for(const RunConfig& c) {
  RunSettings s;
  s.grid = c.grid;
  s.dt = c.time.dt;
  s.T = c.time.T;
  s.sample_every = c.time.samples;
  return s;
}

std::string verdict_csv(const Verdict& v) {
  std::ostringstream os;
  write_verdict_csv(os, v);
  return os.str();
}

int simulate(const RunConfig& c, Artifacts& out, json& results) {
  const State s0 = initial_data(c.init, c.grid);
  const Thresholds th = thresholds(c.params);
  StepPlan plan{c.params, c.grid, c.time.dt, c.time.T};
  Observers obs;
  obs.sample_every = c.time.samples;
  obs.targets = {{1.0, 0.0, 0.0}};
  if (th.v_bar && *th.v_bar > 0.0 && th.w_bar) {
    obs.box = Box{{0.0, 0.0, 0.0}, {1.0, *th.v_bar, *th.w_bar}};
    obs.box_tol = 1e-8;
  }
  obs.snapshot_times = c.time.snapshots;
  const Observation o = integrate(plan, s0, obs);

  std::ostringstream os;
  csv::Writer w(os, {"t", "sup_u", "inf_u", "sup_v", "inf_v", "sup_w", "inf_w", "dist_100", "in_R"});
  for (const auto& s : o.samples) {
    w.cell(s.t);
    for (int k = 0; k < 3; ++k) w.cell(s.sup[k]).cell(s.inf[k]);
    w.cell(s.distances.front());
    w.cell(s.in_box ? std::string_view(*s.in_box ? "1" : "0") : std::string_view());
    w.end_row();
  }
  out.write("trajectory.csv", os.str());

  static const char* names[] = {"u", "v", "w"};
  for (std::size_t i = 0; i < o.snapshots.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      std::ostringstream fos;
      write_field_csv(fos, o.snapshots.states[i][k]);
      out.write("snapshot_" + std::to_string(i) + "_" + names[k] + ".csv", fos.str());
    }
  }

  const auto& last = o.samples.back();
  results["bound_N"] = o.bound_N;
  results["max_clamp"] = o.max_clamp;
  results["final_sup"] = last.sup;
  results["final_inf"] = last.inf;
  results["final_dist_100"] = last.distances.front();
  return kOk;
}

int picard(const RunConfig& c, Artifacts& out, json& results) {
  const State s0 = initial_data(c.init, c.grid);
  PicardOptions opts = c.picard;
  opts.keep_iterates = false;
  const PicardResult r = solve(s0, c.params, opts);
  std::ostringstream os;
  write_history_csv(os, r.history);
  out.write("picard_history.csv", os.str());

  // Same horizon with the splitting integrator, sampled on the Picard grid.
  StepPlan plan{c.params, c.grid, opts.T0 / opts.K, opts.T0};
  Observers obs;
  obs.keep_states = true;
  const Observation o = integrate(plan, s0, obs);

  results["M"] = r.history.M;
  results["iterations"] = r.history.records.size();
  results["converged"] = r.history.converged;
  results["final_distance"] = r.history.records.back().distance;
  results["stepper_distance"] = trajectory_distance(r.limit, o.states);
  return kOk;
}

int ode(const RunConfig& c, Artifacts& out, json& results) {
  const OdeSolution sol = ode_solve(c.params, c.ode_y0, c.time.T, c.ode_dt);
  std::ostringstream os;
  csv::Writer w(os, {"t", "u", "v", "w"});
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    if (i % c.time.samples != 0 && i + 1 != sol.times.size()) continue;
    w.cell(sol.times[i]).cell(sol.values[i][0]).cell(sol.values[i][1]).cell(sol.values[i][2]);
    w.end_row();
  }
  out.write("ode.csv", os.str());
  results["final"] = sol.values.back();
  return kOk;
}

int equilibria(const RunConfig& c, Artifacts& out, json& results) {
  const EquilibriumReport r = find_equilibria(c.params);
  std::ostringstream os;
  write_equilibria_csv(os, r);
  out.write("equilibria.csv", os.str());
  const Thresholds th = thresholds(c.params);
  results["count"] = r.states.size();
  results["thresholds"] = {{"v_bar", opt(th.v_bar)},     {"w_bar", opt(th.w_bar)},     {"u_under", opt(th.u_under)},
                           {"v_under", opt(th.v_under)}, {"w_under", opt(th.w_under)}, {"v_flat", opt(th.v_flat)},
                           {"w_flat", opt(th.w_flat)},   {"v_tilde", opt(th.v_tilde)}, {"w_tilde", opt(th.w_tilde)}};
  return kOk;
}

int bifurcate(const RunConfig& c, Artifacts& out, json& results) {
  const auto& b = c.bifurcate;
  const auto family = [&](double h) { return b.family == "E1" ? Params::e1(h, b.d) : Params::e2(h, b.d); };
  const auto state = [](double) { return Vec3{0.5, 0.5, 0.5}; };

  std::ostringstream os;
  csv::Writer w(os, {"h", "max_re", "class"});
  constexpr int n = 40;
  for (int i = 0; i <= n; ++i) {
    const double h = b.h_lo + (b.h_hi - b.h_lo) * i / n;
    const ConstantState s = analyse_state(family(h), state(h));
    w.cell(h).cell(s.max_re).cell(to_string(s.stability));
    w.end_row();
  }
  out.write("bifurcate.csv", os.str());
  results["max_re_lo"] = analyse_state(family(b.h_lo), state(b.h_lo)).max_re;
  results["max_re_hi"] = analyse_state(family(b.h_hi), state(b.h_hi)).max_re;
  results["h_star"] = nullptr;
  const double h_star = stability_bifurcation(family, state, b.h_lo, b.h_hi, b.tol);
  results["h_star"] = h_star;
  return kOk;
}

int dispersion(const RunConfig& c, Artifacts& out, json& results) {
  Vec3 y{};
  if (c.dispersion.state) {
    y = *c.dispersion.state;
  } else {
    const EquilibriumReport r = find_equilibria(c.params);
    const auto it = std::find_if(r.states.begin(), r.states.end(), [](const auto& s) { return s.branch == "interior"; });
    if (it == r.states.end()) throw PreconditionError("dispersion: no interior equilibrium; set dispersion.state");
    y = it->y;
  }
  const DispersionScan s = dispersion_scan(c.params, y, c.dispersion.q_max, c.dispersion.n_q);
  std::ostringstream os;
  write_dispersion_csv(os, s);
  out.write("dispersion.csv", os.str());
  results["state"] = y;
  results["max_re_at_zero"] = s.max_re_at_zero;
  results["turing_positive"] = s.turing_positive;
  results["bounded_by_zero_mode"] = s.bounded_by_zero_mode;
  return kOk;
}

int invariant(const RunConfig& c, Artifacts& out, json& results) {
  const RegionSpec region = c.region.kind == RegionKind::custom
                                ? RegionSpec::custom({c.region.lo, c.region.hi}, c.region.tol)
                                : RegionSpec::from_thresholds(c.region.kind, thresholds(c.params), c.region.tol);
  const Verdict v = check_invariance(c.params, region, settings_for(c), c.region.n_samples, c.region.seed);
  out.write("verdict.csv", verdict_csv(v));
  results["region"] = {{"kind", to_string(region.kind)}, {"lo", region.box.lo}, {"hi", region.box.hi}, {"tol", region.tol}};
  results["samples"] = v.samples.size();
  results["exits"] = v.exits();
  bool pass = v.pass();

  if (c.region.c_under) {
    const State s0 = initial_data(c.init, c.grid);
    const Verdict lower = check_lower_region(c.params, s0, *c.region.c_under, c.region.eps, settings_for(c));
    out.write("lower_region.csv", verdict_csv(lower));
    results["lower_region_pass"] = lower.pass();
    results["lower_region_T_eps"] = opt(lower.samples.front().t_eps);
    pass = pass && lower.pass();
  }
  results["pass"] = pass;
  return pass ? kOk : kVerdictFail;
}

int absorb(const RunConfig& c, Artifacts& out, json& results) {
  const State s0 = initial_data(c.init, c.grid);
  const Verdict v = measure_absorption(c.params, s0, c.region.eps, settings_for(c));
  out.write("verdict.csv", verdict_csv(v));
  results["eps"] = c.region.eps;
  results["T_eps"] = opt(v.samples.front().t_eps);
  results["pass"] = v.pass();
  return v.pass() ? kOk : kVerdictFail;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return kConfigError;
  }
  if (dynamic_cast<const NumericGuardError*>(&e)) return kNumericGuard;
  if (dynamic_cast<const NoSignChangeError*>(&e)) return kVerdictFail;
  return kInternal;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

int run(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  Artifacts out(out_dir);
  json results = json::object();
  int code = kOk;
  std::string error;
  try {
    switch (config.subcommand) {
      case Subcommand::simulate: code = simulate(config, out, results); break;
      case Subcommand::picard: code = picard(config, out, results); break;
      case Subcommand::ode: code = ode(config, out, results); break;
      case Subcommand::equilibria: code = equilibria(config, out, results); break;
      case Subcommand::bifurcate: code = bifurcate(config, out, results); break;
      case Subcommand::dispersion: code = dispersion(config, out, results); break;
      case Subcommand::invariant: code = invariant(config, out, results); break;
      case Subcommand::absorb: code = absorb(config, out, results); break;
    }
  } catch (const NoSignChangeError& e) {
    code = kVerdictFail;
    error = e.what();
    results["f_lo"] = e.f_lo();
    results["f_hi"] = e.f_hi();
  } catch (const ConvergenceError& e) {
    code = kNumericGuard;
    error = e.what();
    results["distances"] = e.distances();
  } catch (const std::exception& e) {
    code = exit_code_for(e);
    error = e.what();
  }
  if (!error.empty()) log << "rdpp " << to_string(config.subcommand) << ": " << error << '\n';

  json echo = json::object();
  for (const auto& [k, v] : config.echo) echo[k] = v;
  json manifest;
  manifest["tool"] = "rdpp";
  manifest["version"] = kVersion;
  manifest["subcommand"] = to_string(config.subcommand);
  manifest["config"] = echo;
  manifest["exit_code"] = code;
  manifest["error"] = error.empty() ? json(nullptr) : json(error);
  manifest["results"] = results;
  manifest["files"] = out.files();
  manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
  return code;
}

}  // namespace rdpp

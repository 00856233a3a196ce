#include "rdpp/config.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "rdpp/csv.hpp"
#include "rdpp/error.hpp"

namespace rdpp {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> keys;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"params", {"preset", "mortality_relations", "d", "h", "gamma", "alpha", "theta", "m", "rho", "mu", "nu"}},
      {"grid", {"dim", "n", "L"}},
      {"time", {"T", "dt", "samples", "snapshots"}},
      {"init", {"kind", "amplitude", "seed", "lo", "hi", "bump_width", "modes", "smoothing"}},
      {"region", {"kind", "eps", "n_samples", "tol", "seed", "lo", "hi", "c_under"}},
      {"picard", {"T0", "K", "tol", "max_iter", "horizon_constant"}},
      {"ode", {"y0", "dt"}},
      {"bifurcate", {"family", "d", "h_lo", "h_hi", "tol"}},
      {"dispersion", {"q_max", "n_q", "state"}},
      {"absorb", {"eps"}},
      {"output", {"dir"}},
  };
  return s;
}

std::vector<std::string> required_sections(Subcommand s) {
  switch (s) {
    case Subcommand::simulate: return {"params", "grid", "time"};
    case Subcommand::picard: return {"params", "grid"};
    case Subcommand::ode: return {"params", "ode", "time"};
    case Subcommand::equilibria: return {"params"};
    case Subcommand::bifurcate: return {"bifurcate"};
    case Subcommand::dispersion: return {"params", "dispersion"};
    case Subcommand::invariant: return {"params", "grid", "time", "region"};
    case Subcommand::absorb: return {"params", "grid", "time", "absorb"};
  }
  return {};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Typed access to one parsed section with line-numbered errors.
class Reader {
 public:
  Reader(const Section* sec, std::string name, std::vector<std::pair<std::string, std::string>>& echo)
      : sec_(sec), name_(std::move(name)), echo_(echo) {}

  bool present() const { return sec_ != nullptr; }
  bool has(const std::string& key) const { return sec_ && sec_->keys.count(key); }
  int line(const std::string& key) const {
    if (sec_ && sec_->keys.count(key)) return sec_->keys.at(key).line;
    return sec_ ? sec_->line : 0;
  }

  double number(const std::string& key, std::optional<double> fallback) {
    if (!has(key)) {
      if (!fallback) throw ConfigError("missing required key " + name_ + "." + key, line(key));
      record(key, csv::num(*fallback));
      return *fallback;
    }
    const Entry& e = sec_->keys.at(key);
    const double x = parse_double(e.value, e.line, key);
    record(key, csv::num(x));
    return x;
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) {
      record(key, std::to_string(fallback));
      return fallback;
    }
    const Entry& e = sec_->keys.at(key);
    long long x = 0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError(name_ + "." + key + ": expected an integer", e.line);
    record(key, std::to_string(x));
    return x;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const std::string v = has(key) ? sec_->keys.at(key).value : fallback;
    record(key, v);
    return v;
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    std::vector<double> out = std::move(fallback);
    if (has(key)) {
      out.clear();
      const Entry& e = sec_->keys.at(key);
      std::string_view rest = e.value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(trim(rest.substr(0, comma)), e.line, key));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    }
    std::string joined;
    for (std::size_t i = 0; i < out.size(); ++i) joined += (i ? "," : "") + csv::num(out[i]);
    record(key, joined);
    return out;
  }

  Vec3 triple(const std::string& key, const Vec3& fallback) {
    const auto xs = list(key, {fallback[0], fallback[1], fallback[2]});
    if (xs.size() != 3) throw ConfigError(name_ + "." + key + ": expected three comma-separated values", line(key));
    return {xs[0], xs[1], xs[2]};
  }

  void check(bool ok, const std::string& key, const std::string& what) const {
    if (!ok) throw ConfigError(name_ + "." + key + ": " + what, line(key));
  }

 private:
  double parse_double(const std::string& s, int ln, const std::string& key) const {
    double x = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
      throw ConfigError(name_ + "." + key + ": expected a finite number, got '" + s + "'", ln);
    }
    return x;
  }

  void record(const std::string& key, const std::string& v) { echo_.emplace_back(name_ + "." + key, v); }

  const Section* sec_;
  std::string name_;
  std::vector<std::pair<std::string, std::string>>& echo_;
};

std::map<std::string, Section> tokenize(std::string_view text, int& last_line) {
  std::map<std::string, Section> out;
  Section* current = nullptr;
  std::string current_name;
  int ln = 0;
  for (std::size_t pos = 0; pos <= text.size(); ++ln) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    const int line_no = ln + 1;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      current_name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().count(current_name)) throw ConfigError("unknown section [" + current_name + "]", line_no);
      if (out.count(current_name)) {
        throw ConfigError("duplicate section [" + current_name + "] (first at line " +
                              std::to_string(out[current_name].line) + ")",
                          line_no);
      }
      current = &out[current_name];
      current->line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    if (!current) throw ConfigError("key outside of any section", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (!schema().at(current_name).count(key)) {
      throw ConfigError("unknown key '" + key + "' in [" + current_name + "]", line_no);
    }
    if (auto it = current->keys.find(key); it != current->keys.end()) {
      throw ConfigError("duplicate key '" + key + "' in [" + current_name + "] at lines " +
                            std::to_string(it->second.line) + " and " + std::to_string(line_no),
                        line_no);
    }
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    current->keys[key] = Entry{value, line_no};
  }
  last_line = ln;
  return out;
}

Params read_params(Reader& r) {
  Params p;
  const std::string preset = r.text("preset", "none");
  if (preset == "E1" || preset == "E2") {
    const double h = r.number("h", 0.5);
    const double d = r.number("d", 1.0);
    r.check(h > 0.0, "h", "must be > 0 (Holling half-saturation constant)");
    r.check(d > 0.0, "d", "must be > 0 (predator diffusion); d = 0 is not supported");
    p = preset == "E1" ? Params::e1(h, d) : Params::e2(h, d);
    p.gamma = r.number("gamma", p.gamma);
    p.alpha = r.number("alpha", p.alpha);
    p.theta = r.number("theta", p.theta);
    p.m = r.number("m", p.m);
    p.rho = r.number("rho", p.rho);
    p.mu = r.number("mu", p.mu);
    p.nu = r.number("nu", p.nu);
  } else if (preset == "none") {
    p.d = r.number("d", std::nullopt);
    p.h = r.number("h", std::nullopt);
    p.gamma = r.number("gamma", std::nullopt);
    p.alpha = r.number("alpha", std::nullopt);
    p.theta = r.number("theta", std::nullopt);
    p.m = r.number("m", std::nullopt);
    p.rho = r.number("rho", std::nullopt);
    p.mu = r.number("mu", std::nullopt);
    p.nu = r.number("nu", std::nullopt);
  } else {
    r.check(false, "preset", "expected E1 or E2");
  }
  r.check(p.d > 0.0, "d", "must be > 0 (predator diffusion); d = 0 is not supported");
  r.check(p.h > 0.0, "h", "must be > 0 (Holling half-saturation constant)");
  for (const char* k : {"gamma", "alpha", "theta", "m", "rho", "mu", "nu"}) {
    const double x = k == std::string("gamma")   ? p.gamma
                     : k == std::string("alpha") ? p.alpha
                     : k == std::string("theta") ? p.theta
                     : k == std::string("m")     ? p.m
                     : k == std::string("rho")   ? p.rho
                     : k == std::string("mu")    ? p.mu
                                                 : p.nu;
    r.check(x >= 0.0, k, "must be >= 0");
  }
  const std::string rel = r.text("mortality_relations", p.mortality_relations ? "on" : "off");
  r.check(rel == "on" || rel == "off", "mortality_relations", "expected on or off");
  p.mortality_relations = rel == "on";
  if (p.mortality_relations) {
    r.check(p.m >= p.theta, "m", "must be >= theta (m includes the sleeping rate); set mortality_relations = off to allow");
    r.check(p.rho >= p.alpha, "rho", "must be >= alpha (rho includes the awakening rate); set mortality_relations = off to allow");
  }
  return p;
}

}  // namespace

Subcommand parse_subcommand(std::string_view name) {
  static const std::pair<std::string_view, Subcommand> table[] = {
      {"simulate", Subcommand::simulate},     {"picard", Subcommand::picard},
      {"ode", Subcommand::ode},               {"equilibria", Subcommand::equilibria},
      {"bifurcate", Subcommand::bifurcate},   {"dispersion", Subcommand::dispersion},
      {"invariant", Subcommand::invariant},   {"absorb", Subcommand::absorb},
  };
  for (const auto& [n, s] : table) {
    if (n == name) return s;
  }
  throw ConfigError("unknown subcommand '" + std::string(name) + "'", 0);
}

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::simulate: return "simulate";
    case Subcommand::picard: return "picard";
    case Subcommand::ode: return "ode";
    case Subcommand::equilibria: return "equilibria";
    case Subcommand::bifurcate: return "bifurcate";
    case Subcommand::dispersion: return "dispersion";
    case Subcommand::invariant: return "invariant";
    case Subcommand::absorb: return "absorb";
  }
  return "?";
}

RunConfig parse_config(std::string_view text, Subcommand subcommand) {
  int last_line = 0;
  const auto sections = tokenize(text, last_line);
  for (const auto& req : required_sections(subcommand)) {
    if (!sections.count(req)) {
      throw ConfigError("missing required section [" + req + "] for subcommand " + to_string(subcommand), last_line);
    }
  }

  RunConfig c;
  c.subcommand = subcommand;
  c.echo.emplace_back("subcommand", to_string(subcommand));
  auto reader = [&](const std::string& name) {
    auto it = sections.find(name);
    return Reader(it == sections.end() ? nullptr : &it->second, name, c.echo);
  };

  if (Reader r = reader("params"); r.present()) c.params = read_params(r);

  if (Reader r = reader("grid"); r.present()) {
    c.grid.dim = int(r.integer("dim", 1));
    r.check(c.grid.dim == 1 || c.grid.dim == 2, "dim", "must be 1 or 2");
    c.grid.n = int(r.integer("n", 64));
    r.check(c.grid.n >= 4, "n", "need at least 4 points per axis");
    c.grid.length = r.number("L", 1.0);
    r.check(c.grid.length > 0.0, "L", "must be > 0");
  }

  if (Reader r = reader("time"); r.present()) {
    c.time.T = r.number("T", std::nullopt);
    r.check(c.time.T > 0.0, "T", "must be > 0");
    c.time.dt = r.number("dt", 0.01);
    r.check(c.time.dt > 0.0 && c.time.dt <= c.time.T, "dt", "must satisfy 0 < dt <= T");
    const long long s = r.integer("samples", 1);
    r.check(s >= 1, "samples", "must be >= 1");
    c.time.samples = std::size_t(s);
    c.time.snapshots = r.list("snapshots", {});
    for (double t : c.time.snapshots) r.check(t >= 0.0 && t <= c.time.T, "snapshots", "times must lie in [0, T]");
  }

  // Default initial data: box-random in R (the unit box when v_bar <= 0).
  Box r_box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  if (sections.count("params")) {
    const Thresholds th = thresholds(c.params);
    if (th.v_bar && *th.v_bar > 0.0 && th.w_bar) r_box.hi = {1.0, *th.v_bar, *th.w_bar};
  }

  if (Reader r = reader("region"); r.present()) {
    const std::string kind = r.text("kind", "R");
    r.check(kind == "R" || kind == "R_natural" || kind == "custom", "kind", "expected R, R_natural or custom");
    c.region.kind = parse_region_kind(kind);
    c.region.eps = r.number("eps", 0.05);
    r.check(c.region.eps > 0.0, "eps", "must be > 0");
    c.region.n_samples = int(r.integer("n_samples", 20));
    r.check(c.region.n_samples >= 1, "n_samples", "must be >= 1");
    c.region.tol = r.number("tol", 1e-8);
    r.check(c.region.tol >= 0.0, "tol", "must be >= 0");
    c.region.seed = std::uint64_t(r.integer("seed", 0));
    if (c.region.kind == RegionKind::custom) {
      c.region.lo = r.triple("lo", {0.0, 0.0, 0.0});
      c.region.hi = r.triple("hi", r_box.hi);
      for (int k = 0; k < 3; ++k) r.check(c.region.lo[k] <= c.region.hi[k], "hi", "need lo <= hi");
    }
    if (r.has("c_under")) {
      c.region.c_under = r.number("c_under", std::nullopt);
      r.check(*c.region.c_under > 0.0, "c_under", "must be > 0");
    }
  }

  const bool uses_init = subcommand == Subcommand::simulate || subcommand == Subcommand::picard ||
                         subcommand == Subcommand::invariant || subcommand == Subcommand::absorb;
  if (Reader r = reader("init"); uses_init || r.present()) {
    const std::string kind = r.text("kind", "box-random");
    r.check(kind == "constant" || kind == "gaussian-bump" || kind == "random-fourier" || kind == "box-random", "kind",
            "expected constant, gaussian-bump, random-fourier or box-random");
    c.init.kind = parse_init_kind(kind);
    c.init.amplitude = r.triple("amplitude", {1.0, 1.0, 1.0});
    for (double a : c.init.amplitude) r.check(a >= 0.0, "amplitude", "must be >= 0");
    c.init.seed = std::uint64_t(r.integer("seed", 0));
    c.init.box.lo = r.triple("lo", r_box.lo);
    c.init.box.hi = r.triple("hi", r_box.hi);
    for (int k = 0; k < 3; ++k) {
      r.check(c.init.box.lo[k] >= 0.0 && c.init.box.lo[k] <= c.init.box.hi[k], "hi", "need 0 <= lo <= hi");
    }
    c.init.bump_width = r.number("bump_width", 0.1);
    r.check(c.init.bump_width > 0.0, "bump_width", "must be > 0");
    c.init.modes = int(r.integer("modes", 4));
    r.check(c.init.modes >= 1, "modes", "must be >= 1");
    c.init.smoothing = r.number("smoothing", -1.0);
  }

  if (Reader r = reader("picard"); r.present() || subcommand == Subcommand::picard) {
    c.picard.T0 = r.number("T0", 0.5);
    r.check(c.picard.T0 > 0.0, "T0", "must be > 0");
    c.picard.K = int(r.integer("K", 50));
    r.check(c.picard.K >= 1, "K", "must be >= 1");
    c.picard.tol = r.number("tol", 1e-8);
    r.check(c.picard.tol > 0.0, "tol", "must be > 0");
    c.picard.max_iter = int(r.integer("max_iter", 60));
    r.check(c.picard.max_iter >= 1, "max_iter", "must be >= 1");
    c.picard.horizon_constant = r.number("horizon_constant", 20.0);
    r.check(c.picard.horizon_constant > 0.0, "horizon_constant", "must be > 0");
  }

  if (Reader r = reader("ode"); r.present()) {
    c.ode_y0 = r.triple("y0", {0.5, 0.5, 0.5});
    for (double y : c.ode_y0) r.check(y >= 0.0, "y0", "must be >= 0");
    c.ode_dt = r.number("dt", 1e-3);
    r.check(c.ode_dt > 0.0, "dt", "must be > 0");
  }

  if (Reader r = reader("bifurcate"); r.present()) {
    c.bifurcate.family = r.text("family", "E2");
    r.check(c.bifurcate.family == "E1" || c.bifurcate.family == "E2", "family", "expected E1 or E2");
    c.bifurcate.d = r.number("d", 1.0);
    r.check(c.bifurcate.d > 0.0, "d", "must be > 0");
    c.bifurcate.h_lo = r.number("h_lo", 0.1);
    c.bifurcate.h_hi = r.number("h_hi", 1.0);
    r.check(c.bifurcate.h_lo > 0.0 && c.bifurcate.h_lo < c.bifurcate.h_hi, "h_hi", "need 0 < h_lo < h_hi");
    c.bifurcate.tol = r.number("tol", 1e-7);
    r.check(c.bifurcate.tol > 0.0, "tol", "must be > 0");
  }

  if (Reader r = reader("dispersion"); r.present()) {
    c.dispersion.q_max = r.number("q_max", 10.0);
    r.check(c.dispersion.q_max > 0.0, "q_max", "must be > 0");
    c.dispersion.n_q = int(r.integer("n_q", 200));
    r.check(c.dispersion.n_q >= 2, "n_q", "must be >= 2");
    if (r.has("state")) c.dispersion.state = r.triple("state", {});
  }

  if (Reader r = reader("absorb"); r.present()) {
    c.region.eps = r.number("eps", 0.05);
    r.check(c.region.eps > 0.0, "eps", "must be > 0");
  }

  {
    Reader r = reader("output");
    c.output_dir = r.text("dir", "out");
  }
  return c;
}

}  // namespace rdpp

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdpp/grid.hpp"
#include "rdpp/invariant.hpp"
#include "rdpp/model.hpp"
#include "rdpp/picard.hpp"

namespace rdpp {

enum class Subcommand { simulate, picard, ode, equilibria, bifurcate, dispersion, invariant, absorb };
Subcommand parse_subcommand(std::string_view name);  // throws ConfigError
std::string to_string(Subcommand s);

struct TimeBlock {
  double T = 1.0;
  double dt = 0.01;
  std::size_t samples = 1;          ///< sample every this many steps
  std::vector<double> snapshots;    ///< times at which full fields are written
};

struct RegionBlock {
  RegionKind kind = RegionKind::R;
  double eps = 0.05;
  int n_samples = 20;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
  std::optional<double> c_under;   ///< set: also run the lower-region check on init
};

struct BifurcateBlock {
  std::string family = "E2";
  double d = 1.0;
  double h_lo = 0.1;
  double h_hi = 1.0;
  double tol = 1e-7;
};

struct DispersionBlock {
  double q_max = 10.0;
  int n_q = 200;
  std::optional<Vec3> state;  ///< default: first interior equilibrium
};

struct RunConfig {
  Subcommand subcommand = Subcommand::simulate;
  Params params;
  Grid grid;
  TimeBlock time;
  InitSpec init;
  RegionBlock region;
  PicardOptions picard;
  Vec3 ode_y0{0.5, 0.5, 0.5};
  double ode_dt = 1e-3;
  BifurcateBlock bifurcate;
  DispersionBlock dispersion;
  std::string output_dir = "out";
  /// Every setting after defaults, as (section.key, value) in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Grammar: `[section]` headers, one `key = value` per line, `#` starts a
/// comment, blank lines ignored. Vectors are comma separated. Which sections
/// are required depends on the subcommand (see README).
RunConfig parse_config(std::string_view text, Subcommand subcommand);

}  // namespace rdpp

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdpp/grid.hpp"
#include "rdpp/model.hpp"

namespace rdpp {

enum class RegionKind { R, R_natural, custom };
RegionKind parse_region_kind(const std::string& name);
std::string to_string(RegionKind kind);

struct RegionSpec {
  RegionKind kind = RegionKind::R;
  Box box;
  double tol = 1e-8;

  /// R = [0,1] x [0,v_bar] x [0,w_bar] (needs v_bar > 0) or
  /// R_natural = [u_,1] x [v_,v_bar] x [w_,w_bar] (needs all lower thresholds).
  /// Throws PreconditionError when the thresholds are unavailable.
  static RegionSpec from_thresholds(RegionKind kind, const Thresholds& th, double tol = 1e-8);
  static RegionSpec custom(const Box& box, double tol = 1e-8);
};

struct SampleVerdict {
  int sample = 0;
  std::uint64_t seed = 0;
  bool pass = true;
  std::optional<double> first_exit_t;
  std::optional<int> component;
  std::optional<std::size_t> node;
  std::optional<double> t_eps;
  double final_distance = 0.0;  ///< to the asymptotic target, when one is set
};

struct Verdict {
  std::vector<SampleVerdict> samples;
  std::optional<Vec3> target;

  bool pass() const;
  std::size_t exits() const;
};

struct RunSettings {
  Grid grid{1, 256, 64.0};
  double dt = 0.01;
  double T = 50.0;
  std::size_t sample_every = 1;
};

/// Integrates n_samples seeded box-random initial states drawn in the region
/// (seed, seed+1, ...) and checks membership at every sample time.
Verdict check_invariance(const Params& p, const RegionSpec& region, const RunSettings& run, int n_samples,
                         std::uint64_t seed);

/// Same check for given initial states (which need not lie in the region).
Verdict check_invariance_from(const Params& p, const RegionSpec& region, const RunSettings& run,
                              const std::vector<State>& initial);

/// Entry time into [0,1+eps) x [0,v_bar+eps) x [0,w_bar+eps) after which the
/// trajectory stays inside through run.T; the crossing is located by linear
/// interpolation of the largest excess between samples.
Verdict measure_absorption(const Params& p, const State& s0, double eps, const RunSettings& run);

/// Lower-region behaviour: entry into the eps-inflated open box around
/// R_natural and, when s0 lies in R_natural, membership at every sample.
Verdict check_lower_region(const Params& p, const State& s0, double c_under, double eps,
                           const RunSettings& run);

/// Final sup-distance to a constant target; passes when below threshold.
Verdict measure_convergence(const Params& p, const State& s0, const Vec3& target, double threshold,
                            const RunSettings& run);

/// Parameter sets from base with gamma and mu on the given grids for which
/// u_, v_ and w_ all exist and are positive.
std::vector<Params> lower_region_scan(const Params& base, const std::vector<double>& gammas,
                                      const std::vector<double>& mus);

/// CSV `sample,seed,pass,first_exit_t,component,T_eps`.
void write_verdict_csv(std::ostream& os, const Verdict& v);

}  // namespace rdpp

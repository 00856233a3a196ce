#pragma once

#include <optional>
#include <vector>

#include "rdpp/grid.hpp"

namespace rdpp {

/// States on a time grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t size() const { return times.size(); }
  void push(double t, State s) {
    times.push_back(t);
    states.push_back(std::move(s));
  }
};

/// Scalar record of one sampled state.
struct SampleSummary {
  double t = 0.0;
  Vec3 sup{};
  Vec3 inf{};
  std::optional<bool> in_box;    ///< present when the observer tracks a box
  std::vector<double> distances;  ///< sup-distance to each tracked constant state
  double grad_w = 0.0;           ///< central-difference sup of the w gradient
};

/// Largest sup-distance between two trajectories on the same time grid.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace rdpp

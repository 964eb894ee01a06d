#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "sbloc/postprocess.hpp"
#include "sbloc/scenario.hpp"

namespace sbloc {

struct TruthSource {
  Vec3 position = Vec3::Zero();
  double strength = 0.0;
  std::size_t grid_index = 0; ///< 1-based
};

/// Ground-truth sources of a scenario (grid-snapped, per-band powers).
std::vector<TruthSource> truth_sources(const Scenario& scenario);

struct MatchedPair {
  std::size_t estimate = 0;
  std::size_t truth = 0;
  double position_error = 0.0; ///< metres
  double strength_ratio = 0.0; ///< estimate / truth
};

struct Evaluation {
  std::vector<MatchedPair> pairs;
  std::size_t unmatched_estimates = 0;
  std::size_t unmatched_truths = 0;
  double max_position_error = 0.0;
};

/// Greedy nearest matching: repeatedly pair the closest remaining
/// (estimate, truth) couple, up to max_distance.
Evaluation evaluate(const std::vector<SourceEstimate>& estimates, const std::vector<TruthSource>& truth,
                    double max_distance = std::numeric_limits<double>::infinity());

} // namespace sbloc

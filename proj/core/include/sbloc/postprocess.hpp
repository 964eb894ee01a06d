#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sbloc/geometry.hpp"
#include "sbloc/linalg.hpp"

namespace sbloc {

struct WeightedPoint {
  Vec3 position = Vec3::Zero();
  double strength = 0.0;
  std::size_t grid_index = 0; ///< 1-based
};

struct RemapResult {
  std::vector<WeightedPoint> points;
  /// Largest |Im X_ii| over the kept entries.
  double max_imag = 0.0;
};

/// Grid positions and strengths |Re X_ii| of every diagonal entry with
/// |X_ii| > threshold.
RemapResult remap_diagonal(const ComplexVector& diag, const FocusGrid& grid, double threshold);

struct KMeansOptions {
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  /// Strength-weighted centroids instead of plain means.
  bool weighted = false;
};

struct Clustering {
  std::vector<std::size_t> labels;
  std::vector<Vec3> centres;
  /// Within-cluster sum of squares after every assignment step.
  std::vector<double> wcss;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding.
Clustering kmeans(const std::vector<WeightedPoint>& points, std::size_t k, const KMeansOptions& opts = {});

/// Mean silhouette coefficient of a labelling (singleton members score 0).
double mean_silhouette(const std::vector<WeightedPoint>& points, const std::vector<std::size_t>& labels,
                       std::size_t k);

struct KSelection {
  std::size_t k = 1;
  /// (k, mean silhouette) for every candidate tried.
  std::vector<std::pair<std::size_t, double>> table;
};

inline constexpr double kSilhouetteGate = 0.5;

/// k in [2, min(k_max, #points - 1)] maximising the mean silhouette; 1 when
/// the best score is below kSilhouetteGate.
KSelection choose_k(const std::vector<WeightedPoint>& points, std::size_t k_max,
                    const KMeansOptions& opts = {});

struct SourceEstimate {
  Vec3 centroid = Vec3::Zero();
  double total_strength = 0.0;
  std::vector<std::size_t> member_indices; ///< 1-based grid indices
};

/// One estimate per non-empty cluster, strongest first.
std::vector<SourceEstimate> summarize(const std::vector<WeightedPoint>& points, const Clustering& clustering);

/// Merges estimates whose centroids are closer than radius. Merged centroids
/// are strength-weighted; strengths add.
std::vector<SourceEstimate> merge_close(std::vector<SourceEstimate> estimates, double radius);

} // namespace sbloc

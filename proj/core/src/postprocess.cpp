#include "sbloc/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sbloc/errors.hpp"
#include "sbloc/rng.hpp"

namespace sbloc {

RemapResult remap_diagonal(const ComplexVector& diag, const FocusGrid& grid, double threshold) {
  if (static_cast<std::size_t>(diag.size()) != grid.size())
    throw DimensionError("remap_diagonal: diagonal has " + std::to_string(diag.size()) +
                         " entries, grid has " + std::to_string(grid.size()));
  RemapResult out;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag(i)) <= threshold)
      continue;
    out.points.push_back({grid.point(static_cast<std::size_t>(i)), std::abs(diag(i).real()),
                          static_cast<std::size_t>(i) + 1});
    out.max_imag = std::max(out.max_imag, std::abs(diag(i).imag()));
  }
  return out;
}

namespace {

double wcss_of(const std::vector<WeightedPoint>& points, const std::vector<std::size_t>& labels,
               const std::vector<Vec3>& centres) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    s += (points[i].position - centres[labels[i]]).squaredNorm();
  return s;
}

std::vector<Vec3> seed_plus_plus(const std::vector<WeightedPoint>& points, std::size_t k, SequentialRng& rng) {
  std::vector<Vec3> centres;
  centres.push_back(points[rng.below(points.size())].position);
  std::vector<double> d2(points.size(), std::numeric_limits<double>::infinity());
  while (centres.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], (points[i].position - centres.back()).squaredNorm());
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        target -= d2[i];
        if (target <= 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(points.size());
    }
    centres.push_back(points[pick].position);
  }
  return centres;
}

} // namespace

Clustering kmeans(const std::vector<WeightedPoint>& points, std::size_t k, const KMeansOptions& opts) {
  if (k < 1)
    throw ParameterError("kmeans: k must be >= 1");
  if (k > points.size())
    throw ParameterError("kmeans: k = " + std::to_string(k) + " exceeds the number of points (" +
                         std::to_string(points.size()) + ")");
  SequentialRng rng(opts.seed, Stream::kmeans);
  Clustering out;
  out.centres = seed_plus_plus(points, k, rng);
  out.labels.assign(points.size(), 0);
  bool first = true;

  for (std::size_t iter = 0; iter < std::max<std::size_t>(opts.max_iter, 1); ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = (points[i].position - out.centres[c]).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      if (first || out.labels[i] != best) {
        out.labels[i] = best;
        changed = true;
      }
    }
    first = false;
    out.wcss.push_back(wcss_of(points, out.labels, out.centres));
    ++out.iterations;
    if (!changed && iter > 0)
      break;

    std::vector<Vec3> sum(k, Vec3::Zero());
    std::vector<double> mass(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double w = opts.weighted ? points[i].strength : 1.0;
      sum[out.labels[i]] += w * points[i].position;
      mass[out.labels[i]] += w;
      ++count[out.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centre.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double dist = (points[i].position - out.centres[out.labels[i]]).squaredNorm();
          if (dist > far_d) {
            far_d = dist;
            far = i;
          }
        }
        out.centres[c] = points[far].position;
        out.labels[far] = c;
      } else if (mass[c] > 0.0) {
        out.centres[c] = sum[c] / mass[c];
      }
    }
  }
  return out;
}

double mean_silhouette(const std::vector<WeightedPoint>& points, const std::vector<std::size_t>& labels,
                       std::size_t k) {
  const std::size_t n = points.size();
  if (n == 0)
    return 0.0;
  std::vector<std::size_t> size(k, 0);
  for (auto l : labels)
    ++size[l];
  double total = 0.0;
  std::vector<double> dist_sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (size[labels[i]] <= 1)
      continue;
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        dist_sum[labels[j]] += (points[i].position - points[j].position).norm();
    const double a = dist_sum[labels[i]] / static_cast<double>(size[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != labels[i] && size[c] > 0)
        b = std::min(b, dist_sum[c] / static_cast<double>(size[c]));
    if (!std::isfinite(b))
      continue;
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

KSelection choose_k(const std::vector<WeightedPoint>& points, std::size_t k_max, const KMeansOptions& opts) {
  KSelection out;
  if (points.size() < 2)
    return out;
  const std::size_t hi = std::min(k_max, points.size() - 1);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 1;
  for (std::size_t k = 2; k <= hi; ++k) {
    const auto cl = kmeans(points, k, opts);
    const double s = mean_silhouette(points, cl.labels, k);
    out.table.emplace_back(k, s);
    if (s > best) {
      best = s;
      best_k = k;
    }
  }
  out.k = best >= kSilhouetteGate ? best_k : 1;
  return out;
}

std::vector<SourceEstimate> summarize(const std::vector<WeightedPoint>& points, const Clustering& clustering) {
  std::vector<SourceEstimate> out(clustering.centres.size());
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c].centroid = clustering.centres[c];
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& e = out[clustering.labels[i]];
    e.total_strength += points[i].strength;
    e.member_indices.push_back(points[i].grid_index);
  }
  std::erase_if(out, [](const SourceEstimate& e) { return e.member_indices.empty(); });
  std::stable_sort(out.begin(), out.end(),
                   [](const SourceEstimate& a, const SourceEstimate& b) { return a.total_strength > b.total_strength; });
  return out;
}

std::vector<SourceEstimate> merge_close(std::vector<SourceEstimate> estimates, double radius) {
  if (radius <= 0.0)
    return estimates;
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < estimates.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < estimates.size() && !merged; ++j) {
        if ((estimates[i].centroid - estimates[j].centroid).norm() >= radius)
          continue;
        auto& a = estimates[i];
        auto& b = estimates[j];
        const double total = a.total_strength + b.total_strength;
        if (total > 0.0)
          a.centroid = (a.total_strength * a.centroid + b.total_strength * b.centroid) / total;
        else
          a.centroid = 0.5 * (a.centroid + b.centroid);
        a.total_strength = total;
        a.member_indices.insert(a.member_indices.end(), b.member_indices.begin(), b.member_indices.end());
        estimates.erase(estimates.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
    }
  }
  std::stable_sort(estimates.begin(), estimates.end(),
                   [](const SourceEstimate& a, const SourceEstimate& b) { return a.total_strength > b.total_strength; });
  return estimates;
}

} // namespace sbloc

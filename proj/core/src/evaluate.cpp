#include "sbloc/evaluate.hpp"

#include <algorithm>
#include <tuple>

namespace sbloc {

std::vector<TruthSource> truth_sources(const Scenario& scenario) {
  std::vector<TruthSource> out;
  for (const auto& p : place_sources(scenario).sources)
    out.push_back({p.grid_position, p.band_power, p.grid_index + 1});
  return out;
}

Evaluation evaluate(const std::vector<SourceEstimate>& estimates, const std::vector<TruthSource>& truth,
                    double max_distance) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t e = 0; e < estimates.size(); ++e)
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const double d = (estimates[e].centroid - truth[t].position).norm();
      if (d <= max_distance)
        candidates.emplace_back(d, e, t);
    }
  std::sort(candidates.begin(), candidates.end());

  Evaluation out;
  std::vector<bool> used_e(estimates.size(), false);
  std::vector<bool> used_t(truth.size(), false);
  for (const auto& [d, e, t] : candidates) {
    if (used_e[e] || used_t[t])
      continue;
    used_e[e] = used_t[t] = true;
    const double ratio = truth[t].strength > 0.0 ? estimates[e].total_strength / truth[t].strength : 0.0;
    out.pairs.push_back({e, t, d, ratio});
    out.max_position_error = std::max(out.max_position_error, d);
  }
  out.unmatched_estimates = static_cast<std::size_t>(std::count(used_e.begin(), used_e.end(), false));
  out.unmatched_truths = static_cast<std::size_t>(std::count(used_t.begin(), used_t.end(), false));
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.truth < b.truth; });
  return out;
}

} // namespace sbloc

#include "wallmap/map_eval.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace wallmap {

EvalReport evaluate_map(const WallMap& map, const std::vector<WallParam>& truth, double gate) {
  if (!(gate > 0.0)) {
    throw std::invalid_argument("evaluate_map: gate must be > 0");
  }
  EvalReport report;
  report.n_truth = truth.size();
  report.n_estimated = map.size();

  struct Pair {
    double error;
    std::size_t truth_index;
    std::size_t lm_index;
  };
  std::vector<Pair> pairs;
  for (std::size_t ti = 0; ti < truth.size(); ++ti) {
    for (std::size_t li = 0; li < map.landmarks().size(); ++li) {
      const double err = (map.landmarks()[li].mean.vec() - truth[ti].vec()).norm();
      if (err <= gate) {
        pairs.push_back({err, ti, li});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.error, a.truth_index, a.lm_index) <
           std::tie(b.error, b.truth_index, b.lm_index);
  });

  std::vector<bool> truth_taken(truth.size(), false);
  std::vector<bool> lm_taken(map.size(), false);
  double sum_sq = 0.0;
  double sum = 0.0;
  for (const Pair& p : pairs) {
    if (truth_taken[p.truth_index] || lm_taken[p.lm_index]) {
      continue;
    }
    truth_taken[p.truth_index] = true;
    lm_taken[p.lm_index] = true;
    report.matches.push_back({p.truth_index, map.landmarks()[p.lm_index].id, p.error});
    sum_sq += p.error * p.error;
    sum += p.error;
    report.max_error = std::max(report.max_error, p.error);
  }

  const double matched = static_cast<double>(report.matches.size());
  report.precision = report.n_estimated == 0 ? (report.n_truth == 0 ? 1.0 : 0.0)
                                             : matched / static_cast<double>(report.n_estimated);
  report.recall = report.n_truth == 0 ? 1.0 : matched / static_cast<double>(report.n_truth);
  if (!report.matches.empty()) {
    report.rmse = std::sqrt(sum_sq / matched);
    report.mean_error = sum / matched;
  }
  return report;
}

}  // namespace wallmap

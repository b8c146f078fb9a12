#pragma once

#include <array>
#include <span>
#include <vector>

#include "semiret/matrix.hpp"

namespace semiret {

// Probability that a random positive outscores a random negative, ties
// credited 0.5 (rank-sum form). Throws MetricError without both classes.
double auc(std::span<const double> scores, std::span<const int> labels);

struct RankedJudgments {
  std::vector<int> retrieved;  // grades in retrieved order
  std::vector<int> judged;     // every grade known for the query
};

// DCG@k with gain 2^rel - 1 and discount 1/log2(rank + 1) over the ideal
// DCG@k; 0 when the ideal DCG is 0.
double ndcg_at_k(const RankedJudgments& ranked, std::size_t k = 10);

struct PcaProjection {
  std::array<std::vector<double>, 3> components;  // unit directions in input space
  std::vector<std::array<double, 3>> coordinates;  // one row per input vector
  std::array<double, 3> explained_variance_ratio{};
  std::vector<double> mean;
};

// Mean-centred PCA onto the top three covariance eigenvectors. Each component
// is oriented so its largest-magnitude coordinate is positive. Needs at least
// four vectors of width >= 3 (InputError otherwise).
PcaProjection pca_project(std::span<const std::vector<double>> vectors);

}  // namespace semiret

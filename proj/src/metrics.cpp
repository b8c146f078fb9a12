#include "semiret/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "semiret/errors.hpp"

namespace semiret {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw MetricError("auc: length mismatch");
  std::size_t pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw MetricError("auc: labels must be 0 or 1");
    pos += static_cast<std::size_t>(y);
  }
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw MetricError("auc: needs at least one positive and one negative");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Sum of (1-based, tie-averaged) ranks of the positives.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double n = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

namespace {

double dcg(std::span<const int> grades, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    sum += (std::exp2(static_cast<double>(grades[i])) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return sum;
}

}  // namespace

double ndcg_at_k(const RankedJudgments& ranked, std::size_t k) {
  std::vector<int> ideal = ranked.judged;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double ideal_dcg = dcg(ideal, k);
  if (ideal_dcg == 0.0) return 0.0;
  return dcg(ranked.retrieved, k) / ideal_dcg;
}

PcaProjection pca_project(std::span<const std::vector<double>> vectors) {
  constexpr std::size_t kDims = 3;
  if (vectors.size() < kDims + 1) {
    throw InputError("pca_project: needs at least " + std::to_string(kDims + 1) + " vectors");
  }
  const std::size_t width = vectors.front().size();
  if (width < kDims) throw InputError("pca_project: vectors narrower than 3");
  const std::size_t n = vectors.size();

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != width) throw InputError("pca_project: ragged input");
    for (std::size_t j = 0; j < width; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
    }
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw InternalError("pca_project: eigensolver failed");

  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const double total = std::max(0.0, cov.trace());

  PcaProjection out;
  out.mean.assign(mean.data(), mean.data() + width);
  out.coordinates.assign(n, {0.0, 0.0, 0.0});
  for (std::size_t c = 0; c < kDims; ++c) {
    const auto col = static_cast<Eigen::Index>(width - 1 - c);
    Eigen::VectorXd dir = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    dir.cwiseAbs().maxCoeff(&arg);
    if (dir(arg) < 0.0) dir = -dir;
    out.components[c].assign(dir.data(), dir.data() + width);
    const double lambda = std::max(0.0, values(col));
    out.explained_variance_ratio[c] = total > 0.0 ? std::min(1.0, lambda / total) : 0.0;
    const Eigen::VectorXd proj = x * dir;
    for (std::size_t i = 0; i < n; ++i) out.coordinates[i][c] = proj(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace semiret

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "semiret/errors.hpp"
#include "semiret/metrics.hpp"

using namespace semiret;

namespace {

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

double brute_ndcg(const std::vector<int>& retrieved, std::vector<int> judged, std::size_t k) {
  auto dcg = [k](const std::vector<int>& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size() && i < k; ++i) {
      sum += (std::pow(2.0, g[i]) - 1.0) / (std::log(static_cast<double>(i) + 2.0) / std::log(2.0));
    }
    return sum;
  };
  std::sort(judged.rbegin(), judged.rend());
  const double ideal = dcg(judged);
  return ideal == 0.0 ? 0.0 : dcg(retrieved) / ideal;
}

}  // namespace

TEST(Auc, Examples) {
  EXPECT_EQ(auc(std::vector<double>{0.9, 0.8, 0.1, 0.2}, std::vector<int>{1, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.6, 0.4, 0.2}, std::vector<int>{1, 0, 1, 0}), 0.75);
  EXPECT_EQ(auc(std::vector<double>{0.3, 0.3, 0.3}, std::vector<int>{1, 0, 0}), 0.5);
}

TEST(Auc, Errors) {
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), MetricError);
  EXPECT_THROW(auc(std::vector<double>{0.1}, std::vector<int>{1, 0}), MetricError);
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 3}), MetricError);
}

TEST(Auc, MatchesPairwiseOracleWithTies) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % 7) / 7.0;
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    const double a = auc(s, y);
    EXPECT_NEAR(a, brute_auc(s, y), 1e-12);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    std::vector<double> flipped(n);
    for (std::size_t i = 0; i < n; ++i) flipped[i] = -s[i];
    EXPECT_NEAR(auc(flipped, y), 1.0 - a, 1e-12);
  }
}

TEST(Auc, InvariantToMonotoneTransform) {
  const std::vector<double> s{0.1, 0.7, 0.3, 0.9, 0.5};
  const std::vector<int> y{0, 1, 0, 1, 1};
  std::vector<double> t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(3 * s[i]) - 2;
  EXPECT_EQ(auc(s, y), auc(t, y));
}

TEST(Ndcg, Examples) {
  EXPECT_DOUBLE_EQ(ndcg_at_k({{3, 2, 1, 0}, {0, 1, 2, 3}}, 10), 1.0);
  EXPECT_NEAR(ndcg_at_k({{0, 3}, {3, 0}}, 10), 0.63093, 1e-5);
  EXPECT_EQ(ndcg_at_k({{0, 0}, {0, 0}}, 10), 0.0);
}

TEST(Ndcg, CutoffAndOracle) {
  EXPECT_EQ(ndcg_at_k({{0, 1}, {1, 0}}, 1), 0.0);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 25;
    std::vector<int> g(n);
    for (auto& x : g) x = static_cast<int>(rng() % 4);
    std::vector<int> retrieved = g;
    std::shuffle(retrieved.begin(), retrieved.end(), rng);
    const double v = ndcg_at_k({retrieved, g}, 10);
    EXPECT_NEAR(v, brute_ndcg(retrieved, g, 10), 1e-12);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(Pca, CollinearPoints) {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({static_cast<double>(i), 2.0 * i, -1.0 * i});
  const PcaProjection p = pca_project(pts);
  EXPECT_NEAR(p.explained_variance_ratio[0], 1.0, 1e-12);
  EXPECT_NEAR(p.explained_variance_ratio[1], 0.0, 1e-12);
  EXPECT_NEAR(p.explained_variance_ratio[2], 0.0, 1e-12);
  const double s = std::sqrt(6.0);
  EXPECT_NEAR(p.components[0][0], 1 / s, 1e-12);
  EXPECT_NEAR(p.components[0][1], 2 / s, 1e-12);
  EXPECT_NEAR(p.components[0][2], -1 / s, 1e-12);
}

TEST(Pca, ZeroVarianceAxisNeverAppears) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 30; ++i) pts.push_back({n(rng), 0.0, 2 * n(rng), n(rng)});
  const PcaProjection p = pca_project(pts);
  EXPECT_NEAR(p.components[0][1], 0.0, 1e-12);
  EXPECT_NEAR(p.components[1][1], 0.0, 1e-12);
  EXPECT_NEAR(p.components[2][1], 0.0, 1e-12);
}

TEST(Pca, Errors) {
  std::vector<std::vector<double>> three(3, std::vector<double>{1, 2, 3});
  EXPECT_THROW(pca_project(three), InputError);
  std::vector<std::vector<double>> narrow(6, std::vector<double>{1, 2});
  EXPECT_THROW(pca_project(narrow), InputError);
  std::vector<std::vector<double>> ragged(5, std::vector<double>{1, 2, 3});
  ragged[2].push_back(4);
  EXPECT_THROW(pca_project(ragged), InputError);
}

// Oracle: thin SVD of the centred data matrix.
TEST(Pca, MatchesSvdOracle) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  const int rows = 20, cols = 5;
  std::vector<std::vector<double>> pts(rows, std::vector<double>(cols));
  const double scale[cols] = {5.0, 3.0, 2.0, 0.5, 0.2};
  Eigen::MatrixXd x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      pts[i][j] = scale[j] * n(rng) + 1.0;
      x(i, j) = pts[i][j];
    }
  }
  x.rowwise() -= x.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd rank3 = svd.matrixU().leftCols(3) * svd.singularValues().head(3).asDiagonal();

  const PcaProjection p = pca_project(pts);
  const double total = svd.singularValues().squaredNorm();
  for (int c = 0; c < 3; ++c) {
    const double sign = (svd.matrixV().col(c).dot(Eigen::Map<const Eigen::VectorXd>(
                            p.components[c].data(), cols)) < 0) ? -1.0 : 1.0;
    for (int j = 0; j < cols; ++j) {
      EXPECT_NEAR(p.components[c][j], sign * svd.matrixV()(j, c), 1e-9);
    }
    for (int i = 0; i < rows; ++i) EXPECT_NEAR(p.coordinates[i][c], sign * rank3(i, c), 1e-9);
    EXPECT_NEAR(p.explained_variance_ratio[c], std::pow(svd.singularValues()(c), 2) / total, 1e-9);
  }
  for (int a = 0; a < rows; ++a) {
    for (int b = a + 1; b < rows; ++b) {
      double dp = 0.0;
      for (int c = 0; c < 3; ++c) dp += std::pow(p.coordinates[a][c] - p.coordinates[b][c], 2);
      EXPECT_NEAR(std::sqrt(dp), (rank3.row(a) - rank3.row(b)).norm(), 1e-9);
    }
  }
}

TEST(Pca, ComponentsOrthonormalAndOriented) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> pts(12, std::vector<double>(6));
  for (auto& v : pts) for (auto& x : v) x = n(rng);
  const PcaProjection p = pca_project(pts);
  for (int a = 0; a < 3; ++a) {
    double maxabs = 0.0, at = 0.0;
    for (double x : p.components[a]) {
      if (std::abs(x) > maxabs) {
        maxabs = std::abs(x);
        at = x;
      }
    }
    EXPECT_GT(at, 0.0);
    for (int b = 0; b < 3; ++b) {
      double dot = 0.0;
      for (int j = 0; j < 6; ++j) dot += p.components[a][j] * p.components[b][j];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-10);
    }
  }
  EXPECT_GE(p.explained_variance_ratio[0], p.explained_variance_ratio[1]);
  EXPECT_GE(p.explained_variance_ratio[1], p.explained_variance_ratio[2]);
}

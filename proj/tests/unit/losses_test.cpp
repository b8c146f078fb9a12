#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "semiret/errors.hpp"
#include "semiret/losses.hpp"
#include "semiret/matchers.hpp"

using namespace semiret;

namespace {
constexpr double kEps = kScoreEpsilon;
}

TEST(CrossEntropy, Examples) {
  EXPECT_NEAR(cross_entropy_loss(std::vector<double>{1 - kEps}, std::vector<int>{1}), 0.0, 1e-6);
  EXPECT_NEAR(cross_entropy_loss(std::vector<double>{0.5}, std::vector<int>{1}), 0.69314718, 1e-8);
  EXPECT_NEAR(cross_entropy_loss(std::vector<double>{0.5}, std::vector<int>{0}), 0.69314718, 1e-8);
}

TEST(CrossEntropy, MeanAndSum) {
  const std::vector<double> s{0.9, 0.2, 0.6};
  const std::vector<int> y{1, 0, 0};
  const double sum = -std::log(0.9) - std::log(0.8) - std::log(0.4);
  EXPECT_NEAR(cross_entropy_loss(s, y, Reduction::kSum), sum, 1e-12);
  EXPECT_NEAR(cross_entropy_loss(s, y), sum / 3, 1e-12);
}

TEST(CrossEntropy, Errors) {
  EXPECT_THROW(cross_entropy_loss(std::vector<double>{1.0}, std::vector<int>{1}), InputError);
  EXPECT_THROW(cross_entropy_loss(std::vector<double>{0.0}, std::vector<int>{0}), InputError);
  EXPECT_THROW(cross_entropy_loss(std::vector<double>{0.5}, std::vector<int>{2}), InputError);
  EXPECT_THROW(cross_entropy_loss(std::vector<double>{0.5, 0.5}, std::vector<int>{1}), InputError);
}

TEST(Distill, Examples) {
  EXPECT_EQ(distill_loss(std::vector<double>{0.3, 0.9}, std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_NEAR(distill_loss(std::vector<double>{0.5}, std::vector<double>{0.8}), 0.55451774, 1e-8);
  EXPECT_NEAR(distill_loss(std::vector<double>{1 - kEps}, std::vector<double>{1 - kEps}), 0.0, 1e-6);
}

TEST(Distill, Errors) {
  EXPECT_THROW(distill_loss(std::vector<double>{1.5}, std::vector<double>{0.5}), InputError);
  EXPECT_THROW(distill_loss(std::vector<double>{0.5}, std::vector<double>{-0.1}), InputError);
  EXPECT_THROW(distill_loss(std::vector<double>{0.5}, std::vector<double>{}), InputError);
}

TEST(Combined, Examples) {
  EXPECT_EQ(combined_loss(1.0, 0.37, 5.0), 0.37);
  EXPECT_EQ(combined_loss(0.0, 0.37, 5.0), 5.0);
  EXPECT_NEAR(combined_loss(0.7, 1.0, 0.5), 0.85, 1e-15);
}

TEST(Combined, NonNegativeForValidInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(kEps, 1 - kEps);
  std::uniform_real_distribution<double> t(0.0, 1 - kEps);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(8), teacher(8);
    std::vector<int> y(8);
    for (int i = 0; i < 8; ++i) {
      s[i] = u(rng);
      teacher[i] = t(rng);
      y[i] = static_cast<int>(rng() % 2);
    }
    const double a = u(rng);
    EXPECT_GE(combined_loss(a, cross_entropy_loss(s, y), distill_loss(s, teacher)), 0.0);
  }
}

TEST(Combined, GradientMatchesDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const double s = u(rng), teacher = u(rng), alpha = u(rng);
    const int y = static_cast<int>(rng() % 2);
    auto loss = [&](double x) {
      return combined_loss(alpha, cross_entropy_loss(std::vector<double>{x}, std::vector<int>{y}),
                           distill_loss(std::vector<double>{x}, std::vector<double>{teacher}));
    };
    const double h = 1e-6;
    const double numeric = (loss(s + h) - loss(s - h)) / (2 * h);
    EXPECT_NEAR(combined_loss_grad(alpha, s, y, teacher), numeric, 1e-6 * std::max(1.0, std::abs(numeric)));
  }
}

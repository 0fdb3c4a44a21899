#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpl/math.hpp"
#include "lpl/rng.hpp"
#include "oracles.hpp"

using namespace lpl;

TEST(Softmax, SymmetricInputsAreUniform) {
  EXPECT_EQ(softmax(RealVec{0, 0}), (ProbVec{0.5, 0.5}));
  for (double a : {-700.0, -3.5, 0.0, 12.0, 800.0}) {
    const ProbVec p = softmax(RealVec{a, a, a});
    for (double v : p) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  }
}

TEST(Softmax, MatchesHighPrecision) {
  const ProbVec p = softmax(RealVec{1, 0});
  const auto ref = oracle::softmax({1, 0});
  EXPECT_NEAR(p[0], ref[0], 1e-15);
  EXPECT_NEAR(p[1], ref[1], 1e-15);
  EXPECT_NEAR(p[0], 0.7311, 1e-4);
}

TEST(Softmax, ShiftInvariantAndNormalised) {
  RngStream rng(7, 0);
  for (int t = 0; t < 100; ++t) {
    RealVec u(5);
    for (double& v : u) v = rng.normal(0, 4);
    const double s = rng.normal(0, 50);
    RealVec shifted = u;
    for (double& v : shifted) v += s;
    const ProbVec a = softmax(u), b = softmax(shifted);
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i], b[i], 1e-9);
      EXPECT_GT(a[i], 0.0);
      sum += a[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Softmax, Rejects) {
  EXPECT_THROW(softmax(RealVec{}), std::invalid_argument);
  EXPECT_THROW(softmax(RealVec{0, NAN}), std::invalid_argument);
  EXPECT_THROW(softmax(RealVec{INFINITY, 0}), std::invalid_argument);
}

TEST(CrossEntropy, Examples) {
  EXPECT_NEAR(cross_entropy(RealVec{0, 0}, RealVec{1, 0}), std::log(2.0), 1e-15);
  for (double t : {-40.0, 0.3, 99.0}) EXPECT_NEAR(cross_entropy(RealVec{t, t}, RealVec{0, 1}), std::log(2.0), 1e-14);
  EXPECT_NEAR(cross_entropy(RealVec{0, 0, 0, 0}, RealVec{0, 0, 1, 0}), oracle::log_sum_exp_ce({0, 0, 0, 0}, 2), 1e-15);
}

TEST(CrossEntropy, MatchesHighPrecisionAndIsPositive) {
  RngStream rng(3, 1);
  for (int t = 0; t < 100; ++t) {
    RealVec u(4);
    for (double& v : u) v = rng.normal(0, 10);
    const std::size_t k = rng.index(4);
    const double ce = cross_entropy(u, k);
    EXPECT_GT(ce, 0.0);
    EXPECT_NEAR(ce, oracle::log_sum_exp_ce(u, k), 1e-12 * std::max(1.0, ce));
    RealVec shifted = u;
    for (double& v : shifted) v += 1e3;
    EXPECT_NEAR(cross_entropy(shifted, k), ce, 1e-9);
  }
}

TEST(CrossEntropy, RejectsNonOneHot) {
  EXPECT_THROW(cross_entropy(RealVec{0, 0}, RealVec{1, 1}), std::invalid_argument);
  EXPECT_THROW(cross_entropy(RealVec{0, 0}, RealVec{0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(cross_entropy(RealVec{0, 0}, RealVec{1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(cross_entropy(RealVec{0, 0}, std::size_t{2}), std::invalid_argument);
}

TEST(CeGradient, Examples) {
  const RealVec g = ce_logit_gradient(RealVec{0, 0}, RealVec{1, 0});
  EXPECT_NEAR(g[0], -0.5, 1e-15);
  EXPECT_NEAR(g[1], 0.5, 1e-15);
  const RealVec h = ce_logit_gradient(RealVec{1, 0}, RealVec{0, 1});
  EXPECT_NEAR(h[0], 0.7311, 1e-4);
  EXPECT_NEAR(h[1], -0.7311, 1e-4);
  // Near the stationary point the gradient vanishes.
  const RealVec z = ce_logit_gradient(RealVec{40, 0}, RealVec{1, 0});
  EXPECT_LT(std::abs(z[0]) + std::abs(z[1]), 1e-16);
}

TEST(CeGradient, MatchesFiniteDifferences) {
  RngStream rng(11, 0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> u(5);
    for (double& v : u) v = rng.normal(0, 2);
    const std::size_t k = rng.index(5);
    const RealVec g = ce_logit_gradient(u, k);
    auto f = [&](const std::vector<double>& x) { return oracle::log_sum_exp_ce(x, k); };
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(g[i], oracle::central_diff(f, u, i, 1e-5), 1e-6);
  }
}

TEST(BinaryLoss, Examples) {
  EXPECT_NEAR(binary_logistic_loss(0, true), std::log(2.0), 1e-15);
  EXPECT_NEAR(binary_logistic_loss(0, false), std::log(2.0), 1e-15);
  EXPECT_NEAR(binary_logistic_loss(2, true), oracle::softplus(-2), 1e-15);
  EXPECT_NEAR(binary_logistic_loss(2, true), 0.1269, 1e-4);
}

TEST(BinaryLoss, OverflowSafeAcrossBranch) {
  for (double u : {-1000.0, -35.0, -30.0, -29.9, -5.0, 5.0, 29.9, 30.0, 35.0, 1000.0}) {
    EXPECT_TRUE(std::isfinite(binary_logistic_loss(u, true)));
    EXPECT_NEAR(softplus(u), oracle::softplus(u), 1e-14 * std::max(1.0, std::abs(u)));
    EXPECT_NEAR(sigmoid(u) + sigmoid(-u), 1.0, 1e-15);
  }
}

TEST(NormalCdf, Examples) {
  EXPECT_EQ(std_normal_cdf(0), 0.5);
  EXPECT_NEAR(std_normal_cdf(-std::sqrt(2.0)), 0.078650, 1e-5);
  EXPECT_NEAR(std_normal_cdf(-std::sqrt(2.0)), oracle::phi(-std::sqrt(2.0)), 1e-15);
}

TEST(NormalCdf, SymmetryAndAccuracy) {
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    EXPECT_NEAR(std_normal_cdf(x) + std_normal_cdf(-x), 1.0, 1e-12);
    EXPECT_NEAR(std_normal_cdf(x), oracle::phi(x), 1e-10);
  }
  // Deep tail keeps relative accuracy.
  EXPECT_NEAR(std_normal_cdf(-30) / oracle::phi(-30), 1.0, 1e-12);
}

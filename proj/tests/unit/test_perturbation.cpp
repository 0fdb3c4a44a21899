#include <gtest/gtest.h>

#include <cmath>

#include "lpl/perturbation.hpp"
#include "lpl/rng.hpp"
#include "oracles.hpp"

using namespace lpl;

namespace {

double class_mean_ce(const std::vector<RealVec>& logits, std::size_t cls, const RealVec& offset) {
  double s = 0;
  for (const RealVec& u : logits) {
    RealVec v = u;
    for (std::size_t c = 0; c < v.size(); ++c) v[c] += offset[c];
    s += oracle::log_sum_exp_ce(v, cls);
  }
  return s / static_cast<double>(logits.size());
}

PerturbationSpec spec(SplitMode mode, double tau, double eps, double deps, double alpha) {
  PerturbationSpec s;
  s.mode = mode;
  s.tau = tau;
  s.epsilon = eps;
  s.delta_epsilon = deps;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST(ClassMeanConfidence, Examples) {
  const std::vector<std::size_t> y01{0, 1};
  const ConfidenceVec q = class_mean_confidence(LogitBatch::single_label({{0, 0}, {0, 0}}, y01));
  EXPECT_EQ(*q[0], 0.5);
  EXPECT_EQ(*q[1], 0.5);

  const std::vector<std::size_t> y0{0};
  const ConfidenceVec one = class_mean_confidence(LogitBatch::single_label({{1, 0}}, y0));
  EXPECT_NEAR(*one[0], oracle::softmax({1, 0})[0], 1e-15);
  EXPECT_FALSE(one[1]);

  const std::vector<std::size_t> y000{0, 0, 0};
  const ConfidenceVec dup = class_mean_confidence(LogitBatch::single_label({{1, 0}, {1, 0}, {1, 0}}, y000));
  EXPECT_NEAR(*dup[0], *one[0], 1e-15);
}

TEST(SplitByPerformance, Examples) {
  const CategorySplit s = split_by_performance({0.3, 0.7}, 0.5);
  EXPECT_EQ(s.positive_set(), (std::vector<std::size_t>{0}));
  EXPECT_EQ(s.negative_set(), (std::vector<std::size_t>{1}));

  const ConfidenceVec q{0.2, 0.9, 0.4, 0.6};
  const double mean = (0.2 + 0.9 + 0.4 + 0.6) / 4.0;
  const CategorySplit m = split_by_performance(q, mean);
  EXPECT_EQ(m.positive, (std::vector<bool>{true, false, true, false}));
  EXPECT_EQ(split_by_performance(q, 0.95).negative_set().size(), 0u);
  // Tie goes to positive augmentation; missing classes too.
  EXPECT_TRUE(split_by_performance({0.5}, 0.5).is_positive(0));
  EXPECT_TRUE(split_by_performance({std::nullopt, 0.9}, 0.1).is_positive(0));
}

TEST(SplitByIndex, Examples) {
  EXPECT_EQ(split_by_index(5, 0).negative_set().size(), 0u);
  EXPECT_EQ(split_by_index(5, 6).positive_set().size(), 0u);
  const CategorySplit s = split_by_index(10, 4);
  EXPECT_EQ(s.negative_set(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(s.positive_set(), (std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9}));
}

TEST(Split, IsAPartition) {
  RngStream rng(2, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t c = 1 + rng.index(12);
    const CategorySplit s = split_by_index(c, rng.uniform(0, static_cast<double>(c) + 1));
    EXPECT_EQ(s.positive_set().size() + s.negative_set().size(), c);
    ConfidenceVec q(c);
    for (auto& v : q) v = rng.uniform();
    const CategorySplit p = split_by_performance(q, rng.uniform());
    EXPECT_EQ(p.num_classes(), c);
    EXPECT_EQ(p.positive_set().size() + p.negative_set().size(), c);
  }
}

TEST(ComputeBounds, Examples) {
  const BoundVector fixed =
      compute_bounds({0.1, 0.5, 0.9}, 0.5, spec(SplitMode::balanced_performance, 0.5, 0.2, 0, 0.1),
                     BoundForm::absolute_difference);
  EXPECT_EQ(fixed.bounds, (RealVec{0.2, 0.2, 0.2}));
  EXPECT_EQ(fixed.steps, (std::vector<std::size_t>{2, 2, 2}));

  const BoundVector b = compute_bounds({0.7}, 0.5, spec(SplitMode::balanced_performance, 0.5, 0.1, 0.2, 0.01),
                                       BoundForm::absolute_difference);
  EXPECT_NEAR(b.bounds[0], 0.14, 1e-15);
  EXPECT_EQ(b.steps[0], 14u);
  EXPECT_EQ(step_count(0.3, 0.1), 3u);
  EXPECT_EQ(step_count(0.29, 0.1), 2u);
  EXPECT_EQ(step_count(0.05, 0.1), 0u);
}

TEST(ComputeBounds, RatioForm) {
  const ConfidenceVec q{0.8, 0.4, 0.2};
  const BoundVector b =
      compute_bounds(q, 1.5, spec(SplitMode::longtail_index, 1.5, 1.0, 2.0, 0.01), BoundForm::ratio);
  EXPECT_NEAR(b.bounds[0], 1.0 + 2.0 * 0.8 / 0.8, 1e-15);
  EXPECT_NEAR(b.bounds[1], 1.0 + 2.0 * 0.2 / 0.4, 1e-15);
  EXPECT_NEAR(b.bounds[2], 1.0 + 2.0 * 0.2 / 0.2, 1e-15);
  EXPECT_THROW(compute_bounds({0.0, 0.4}, 1, spec(SplitMode::longtail_index, 1, 1, 1, 0.1), BoundForm::ratio),
               std::invalid_argument);
  EXPECT_EQ(default_bound_form(SplitMode::balanced_performance), BoundForm::absolute_difference);
  EXPECT_EQ(default_bound_form(SplitMode::longtail_index), BoundForm::ratio);
}

TEST(PgdPerturb, Examples) {
  const std::vector<RealVec> u{{0, 0}};
  const RealVec up = pgd_perturb(u, 0, 0.1, 0.1, Direction::maximize);
  EXPECT_NEAR(up[0], -0.05, 1e-15);
  EXPECT_NEAR(up[1], 0.05, 1e-15);
  const RealVec down = pgd_perturb(u, 0, 0.1, 0.1, Direction::minimize);
  EXPECT_NEAR(down[0], 0.05, 1e-15);
  EXPECT_NEAR(down[1], -0.05, 1e-15);
  EXPECT_EQ(pgd_perturb(u, 0, 0.05, 0.1, Direction::maximize), (RealVec{0, 0}));
  EXPECT_THROW(pgd_perturb({}, 0, 0.1, 0.1, Direction::maximize), std::invalid_argument);
}

TEST(PgdPerturb, StepMatchesFiniteDifferenceGradient) {
  const std::vector<RealVec> u{{0.3, -1.0, 2.0}, {1.0, 0.5, -0.2}};
  const RealVec off = pgd_perturb_steps(u, 1, 1, 0.02, Direction::maximize);
  for (std::size_t c = 0; c < 3; ++c) {
    auto f = [&](const std::vector<double>& delta) { return class_mean_ce(u, 1, delta); };
    EXPECT_NEAR(off[c], 0.02 * oracle::central_diff(f, {0, 0, 0}, c, 1e-5), 1e-9);
  }
}

TEST(PgdPerturb, SupNormGrowsAtMostAlphaPerStep) {
  RngStream rng(6, 0);
  for (int t = 0; t < 100; ++t) {
    std::vector<RealVec> u(3, RealVec(4));
    for (auto& r : u)
      for (double& v : r) v = rng.normal(0, 3);
    const double alpha = rng.uniform(0.001, 0.2), bound = rng.uniform(0, 2);
    const RealVec off = pgd_perturb(u, 2, bound, alpha, Direction::maximize);
    double sup = 0;
    for (double v : off) sup = std::max(sup, std::abs(v));
    EXPECT_LE(sup, alpha * static_cast<double>(step_count(bound, alpha)) + 1e-15);
    EXPECT_LE(sup, bound + alpha);
  }
}

TEST(PgdPerturb, SingleStepOppositeAndMonotone) {
  RngStream rng(19, 0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t c = 2 + rng.index(5);
    std::vector<RealVec> u(1 + rng.index(6), RealVec(c));
    for (auto& r : u)
      for (double& v : r) v = rng.normal(0, 3);
    const std::size_t cls = rng.index(c);
    const double alpha = rng.uniform(0.001, 0.03);
    const RealVec up = pgd_perturb_steps(u, cls, 1, alpha, Direction::maximize);
    const RealVec down = pgd_perturb_steps(u, cls, 1, alpha, Direction::minimize);
    double norm = 0;
    for (std::size_t k = 0; k < c; ++k) {
      ASSERT_EQ(up[k], -down[k]);
      norm += up[k] * up[k];
    }
    if (std::sqrt(norm) / alpha <= 1e-8) continue;
    const double base = class_mean_ce(u, cls, RealVec(c, 0.0));
    EXPECT_GT(class_mean_ce(u, cls, up), base);
    EXPECT_LT(class_mean_ce(u, cls, down), base);
  }
}

TEST(LplLossSingle, ZeroBoundsGivePlainCe) {
  RngStream rng(20, 0);
  std::vector<RealVec> u(10, RealVec(3));
  std::vector<std::size_t> y(10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (double& v : u[i]) v = rng.normal();
    y[i] = i % 3;
  }
  const LogitBatch b = LogitBatch::single_label(u, y);
  const BoundVector zero{{0, 0, 0}, {0, 0, 0}};
  EXPECT_NEAR(lpl_loss_single(b, split_by_index(3, 0), zero, 0.01).loss, mean_cross_entropy(b), 1e-12);

  const BoundVector one{{0.02, 0.02, 0.02}, {1, 1, 1}};
  EXPECT_GE(lpl_loss_single(b, split_by_index(3, 0), one, 0.02).loss, mean_cross_entropy(b));
}

TEST(LplLossSingle, TwoClassToyBatch) {
  const std::vector<std::size_t> y{0};
  const LogitBatch b = LogitBatch::single_label({{0, 0}}, y);
  const BoundVector bounds{{0.1, 0.1}, {1, 1}};
  const LplResult r = lpl_loss_single(b, split_by_index(2, 1), bounds, 0.1);
  EXPECT_NEAR(r.loss, oracle::softplus(0.1), 1e-15);
  EXPECT_NEAR(r.loss, 0.7444, 1e-4);
  EXPECT_TRUE(r.present[0]);
  EXPECT_FALSE(r.present[1]);
  EXPECT_EQ(r.class_offsets[1], (RealVec{0, 0}));
}

TEST(CombinedLaLpl, Degenerate) {
  RngStream rng(21, 0);
  std::vector<RealVec> u(12, RealVec(3));
  std::vector<std::size_t> y(12);
  for (std::size_t i = 0; i < 12; ++i) {
    for (double& v : u[i]) v = rng.normal();
    y[i] = i % 3;
  }
  const LogitBatch b = LogitBatch::single_label(u, y);
  const ClassProfile p = ClassProfile::from_counts({60, 30, 10});
  const CategorySplit s = split_by_index(3, 2);
  const BoundVector bounds{{0.05, 0.05, 0.05}, {5, 5, 5}};
  EXPECT_NEAR(combined_la_lpl_loss(b, p, 0.0, s, bounds, 0.01).loss, lpl_loss_single(b, s, bounds, 0.01).loss, 1e-12);
  const BoundVector zero{{0, 0, 0}, {0, 0, 0}};
  EXPECT_NEAR(combined_la_lpl_loss(b, p, 1.0, s, zero, 0.01).loss,
              perturbed_ce(b, corpus_level_offsets(b, la_offset(p, 1.0))), 1e-12);
}

TEST(CombinedLaLpl, EqualsSequentialApplication) {
  const std::vector<std::size_t> y{0};
  const LogitBatch b = LogitBatch::single_label({{0, 0}}, y);
  const ClassProfile p = ClassProfile::from_counts({3, 1});
  const BoundVector bounds{{0.1, 0.1}, {1, 1}};
  const LplResult r = combined_la_lpl_loss(b, p, 1.0, split_by_index(2, 1), bounds, 0.1);
  // LA shift, then one ascent step from the shifted logits.
  const RealVec la = la_offset(p, 1.0);
  const RealVec shifted{la[0], la[1]};
  const auto q = oracle::softmax(shifted);
  const RealVec step{0.1 * (q[0] - 1.0), 0.1 * q[1]};
  EXPECT_NEAR(r.loss, oracle::log_sum_exp_ce({shifted[0] + step[0], shifted[1] + step[1]}, 0), 1e-14);
}

TEST(MultilabelDelta, Examples) {
  EXPECT_EQ(multilabel_delta(3, 1, 0.0), 0.0);
  EXPECT_EQ(multilabel_delta(3, 1, 0.1), 0.1);    // rank 4 > tau
  EXPECT_EQ(multilabel_delta(0, 3, 0.1), -0.1);   // rank 1 < tau
  const BoundVector bounds{{0.1}, {1}};
  EXPECT_NEAR(lpl_loss_multilabel(LogitBatch::multi_label({{0}}, {{1}}), 0, bounds), oracle::softplus(0.1), 1e-15);
  EXPECT_NEAR(lpl_loss_multilabel(LogitBatch::multi_label({{0}}, {{1}}), 0, bounds), 0.7444, 1e-4);
  // Head side: positive loss decreases, negative loss increases.
  EXPECT_LT(lpl_loss_multilabel(LogitBatch::multi_label({{0}}, {{1}}), 2, bounds), std::log(2.0));
  EXPECT_GT(lpl_loss_multilabel(LogitBatch::multi_label({{0}}, {{0}}), 2, bounds), std::log(2.0));
}

TEST(MultilabelLoss, HandFixture) {
  const std::vector<RealVec> u{{0.5, -1.0, 2.0}, {-0.3, 0.8, 0.0}, {1.2, 0.1, -2.5}};
  const std::vector<RealVec> y{{1, 0, 1}, {0, 1, 0}, {1, 1, 0}};
  const BoundVector bounds{{0.2, 0.15, 0.1}, {0, 0, 0}};
  const double tau = 2.0;
  const RealVec d = multilabel_deltas(3, tau, bounds);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(std::abs(d[c]), bounds.bounds[c]);
  // Hand-evaluated: class 1 has rank 1 < tau -> -0.2; ranks 2, 3 -> +0.15, +0.1.
  const double dd[3] = {-0.2, 0.15, 0.1};
  double sum = 0;
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c)
      sum += y[i][c] == 1.0 ? oracle::softplus(-u[i][c] + dd[c]) : oracle::softplus(u[i][c] - dd[c]);
  EXPECT_NEAR(lpl_loss_multilabel(LogitBatch::multi_label(u, y), tau, bounds), sum / 9.0, 1e-12);
}

TEST(MultilabelLoss, TauZeroRaisesEveryClass) {
  RngStream rng(23, 0);
  for (int t = 0; t < 100; ++t) {
    std::vector<RealVec> u(6, RealVec(4)), y(6, RealVec(4));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t c = 0; c < 4; ++c) {
        u[i][c] = rng.normal(0, 2);
        y[i][c] = rng.uniform() < 0.4 ? 1 : 0;
      }
    const LogitBatch b = LogitBatch::multi_label(u, y);
    BoundVector bounds{RealVec(4), std::vector<std::size_t>(4, 0)};
    for (double& e : bounds.bounds) e = rng.uniform(0, 0.5);
    const auto offsets = multilabel_lpl_offsets(b, 0, bounds);
    const auto var = relative_loss_variation(b, offsets);
    for (const ClassVariation& v : var) {
      if (v.positive) EXPECT_GE(*v.positive, 0.0);
      if (v.negative) EXPECT_LE(*v.negative, 0.0);
    }
  }
}

TEST(MultilabelLoss, ZeroBoundsArePlainBinaryLoss) {
  const std::vector<RealVec> u{{0.5, -1.0}, {2.0, 0.1}};
  const std::vector<RealVec> y{{1, 0}, {0, 1}};
  const LogitBatch b = LogitBatch::multi_label(u, y);
  EXPECT_NEAR(lpl_loss_multilabel(b, 1, BoundVector{{0, 0}, {0, 0}}), mean_binary_loss(b), 1e-15);
}

TEST(PerturbationSpec, Validation) {
  EXPECT_THROW(spec(SplitMode::longtail_index, 7, 0.1, 0, 0.01).validate(5), std::invalid_argument);
  EXPECT_THROW(spec(SplitMode::longtail_index, 1, 0.1, 0, 0.0).validate(5), std::invalid_argument);
  EXPECT_NO_THROW(spec(SplitMode::longtail_index, 6, 0.1, 0, 0.01).validate(5));
  EXPECT_TRUE(spec(SplitMode::longtail_index, 6, 0, 0, 0.01).disabled());
}

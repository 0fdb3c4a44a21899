#include <gtest/gtest.h>

#include <cmath>

#include "lpl/errors.hpp"
#include "lpl/rng.hpp"
#include "lpl/theory.hpp"
#include "oracles.hpp"

using namespace lpl;

namespace {

TheoryParams make(int d, double eta, double sigma, double gamma, double k, double eps, double rp, double rm) {
  TheoryParams p;
  p.d = d;
  p.eta = eta;
  p.sigma = sigma;
  p.gamma = gamma;
  p.k = k;
  p.epsilon = eps;
  p.rho_plus = rp;
  p.rho_minus = rm;
  return p;
}

TheoryParams imbalance_case() { return make(2, 1, 1, 2, 1, 0.2, 1, 1); }
TheoryParams mixed_case() { return make(2, 1, 1, 3.5, 3, 0.1, 1, 1); }

// Data-model objective written out from the class distributions: class +1
// projects to N(d eta, d sigma^2), class -1 to N(-d eta, d K^2 sigma^2).
double objective_oracle(const TheoryParams& p, double shift_plus, double shift_minus, double b) {
  const double s = std::sqrt(static_cast<double>(p.d)) * p.sigma;
  const double de = p.d * p.eta;
  const double miss_minus = 1.0 - oracle::phi((-b - shift_minus + de) / (p.k * s));  // -de + noise + b + shift > 0
  const double miss_plus = oracle::phi((-b - shift_plus - de) / s);                     // de + noise + b + shift <= 0
  return p.gamma * miss_minus + miss_plus;
}

std::pair<double, double> natural_oracle(const TheoryParams& p, double b) {
  const double s = std::sqrt(static_cast<double>(p.d)) * p.sigma;
  const double de = p.d * p.eta;
  return {1.0 - oracle::phi((de - b) / (p.k * s)), oracle::phi((-b - de) / s)};
}

TheoryParams random_feasible(RngStream& rng, Theorem t) {
  for (;;) {
    TheoryParams p = make(1 + static_cast<int>(rng.index(4)), rng.uniform(0.3, 1.5), rng.uniform(0.5, 2.0),
                          rng.uniform(1.0, 8.0), t == Theorem::three ? rng.uniform(1.1, 4.0) : 1.0,
                          rng.uniform(0.0, 0.5), 0, 0);
    p.rho_plus = rng.uniform(0.0, 2.0);
    p.rho_minus = rng.uniform(0.0, 2.0);
    if (is_feasible(p, t)) return p;
  }
}

}  // namespace

TEST(OptimalBiasThm1, Examples) {
  TheoryParams p = imbalance_case();
  p.gamma = 1;
  EXPECT_NEAR(optimal_bias_thm1(p), 0.0, 1e-15);
  EXPECT_NEAR(optimal_bias_thm1(imbalance_case()), 2.0 * std::log(2.0) / (0.4 - 4.0), 1e-15);
  EXPECT_NEAR(optimal_bias_thm1(imbalance_case()), -0.3851, 1e-4);
  p = imbalance_case();
  p.epsilon = 0;
  EXPECT_NEAR(optimal_bias_thm1(p), -2.0 * std::log(2.0) / 4.0, 1e-15);
}

TEST(OptimalBias, MinimisesObjectiveOracle) {
  for (Theorem t : {Theorem::one, Theorem::two, Theorem::three}) {
    for (TheoryParams p : {imbalance_case(), mixed_case(), make(2, 1, 1, 1.1, 2.5, 0.2, 1, 1), make(3, 0.7, 1.3, 4, 1, 0.1, 2, 0.5)}) {
      if (!is_feasible(p, t)) continue;
      const ClassShifts s = perturbation_shifts(p, t);
      const double b = optimal_bias(p, t);
      // Stationary point: the oracle objective is flat to second order there.
      const double h = 1e-4;
      const double f0 = objective_oracle(p, s.plus, s.minus, b);
      EXPECT_LE(f0, objective_oracle(p, s.plus, s.minus, b + h) + 1e-13);
      EXPECT_LE(f0, objective_oracle(p, s.plus, s.minus, b - h) + 1e-13);
    }
  }
}

TEST(OptimalBias, GridSearchOnClosedFormObjective) {
  // Dense grid at 1e-6 resolution around b*, library objective.
  for (auto [p, t] : {std::pair{imbalance_case(), Theorem::one}, std::pair{mixed_case(), Theorem::three}}) {
    const double b = optimal_bias(p, t);
    const GridSearchResult g =
        grid_search_minimum([&](double x) { return perturbed_objective(p, t, x); }, b - 0.01, b + 0.01, 1e-6);
    EXPECT_TRUE(g.interior);
    EXPECT_NEAR(g.argmin, b, 1e-6 + 1e-9);
  }
}

TEST(ErrorsThm1, Examples) {
  TheoryParams p = imbalance_case();
  p.gamma = 1;
  p.epsilon = 0;
  const ErrorPair e = errors_thm1(p);
  EXPECT_NEAR(e.err_plus, oracle::phi(-std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(e.err_minus, oracle::phi(-std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(e.err_plus, 0.07865, 1e-5);
}

TEST(ErrorsThm1, DisplayedFormula) {
  const TheoryParams p = imbalance_case();
  const double s = std::sqrt(2.0);
  const double a = (0.2 - 4.0 + 0.2) / s;
  const ErrorPair e = errors_thm1(p);
  EXPECT_NEAR(e.err_minus, oracle::phi(a / 2 + std::log(2.0) / a - 0.2 / s), 1e-14);
  EXPECT_NEAR(e.err_plus, oracle::phi(a / 2 - std::log(2.0) / a - 0.2 / s), 1e-14);
  EXPECT_NEAR(e.total, (e.err_plus + 2 * e.err_minus) / 3, 1e-15);
  EXPECT_NEAR(e.total_mean, (e.err_plus + e.err_minus) / 2, 1e-15);
}

TEST(ErrorsThm2, DisplayedFormula) {
  TheoryParams p = imbalance_case();
  p.rho_minus = 2.5;
  const double s = std::sqrt(2.0);
  const double a = (0.2 - 4.0 - 0.5) / s;
  const ErrorPair e = errors_thm2(p);
  EXPECT_NEAR(e.err_minus, oracle::phi(a / 2 + std::log(2.0) / a + 0.5 / s), 1e-14);
  EXPECT_NEAR(e.err_plus, oracle::phi(a / 2 - std::log(2.0) / a - 0.2 / s), 1e-14);
}

TEST(ErrorsThm3, DisplayedFormula) {
  const TheoryParams p = mixed_case();
  const double s = std::sqrt(2.0), k = 3.0;
  const double b = (0.1 + 0.1 - 4.0) / (s * (k * k - 1));
  const double q = 2 * std::log(k / 3.5) / (k * k - 1);
  const ErrorPair e = errors_thm3(p);
  EXPECT_NEAR(e.err_plus, oracle::phi(-k * std::sqrt(b * b + q) - b - 0.1 / s), 1e-14);
  EXPECT_NEAR(e.err_minus, oracle::phi(k * b + std::sqrt(b * b + q) - 0.1 / (k * s)), 1e-14);
}

TEST(ClosedForm, EqualsNaturalErrorsAtOptimalBias) {
  RngStream rng(31, 0);
  for (Theorem t : {Theorem::one, Theorem::two, Theorem::three}) {
    for (int i = 0; i < 50; ++i) {
      const TheoryParams p = random_feasible(rng, t);
      const ErrorPair cf = closed_form_errors(p, t);
      const auto [em, ep] = natural_oracle(p, optimal_bias(p, t));
      EXPECT_NEAR(cf.err_minus, em, 1e-12) << p.describe();
      EXPECT_NEAR(cf.err_plus, ep, 1e-12) << p.describe();
      EXPECT_GE(cf.err_minus, 0.0);
      EXPECT_LE(cf.err_plus, 1.0);
    }
  }
}

TEST(ErrorsThm2, ZeroRhoMinusMeansUnperturbedNegativeClass) {
  // With rho_minus = 0 only class +1 is perturbed (by eps); the optimum is that
  // of the objective with shifts (-eps, 0).
  TheoryParams p = imbalance_case();
  p.rho_minus = 0;
  const double b = oracle::grid_argmin([&](double x) { return objective_oracle(p, -p.epsilon, 0.0, x); }, -2, 2, 1e-5);
  EXPECT_NEAR(optimal_bias_thm2(p), b, 1e-5);
  const auto [em, ep] = natural_oracle(p, optimal_bias_thm2(p));
  EXPECT_NEAR(errors_thm2(p).err_minus, em, 1e-12);
  EXPECT_NEAR(errors_thm2(p).err_plus, ep, 1e-12);
}

TEST(OptimalBiasThm3, Examples) {
  TheoryParams p = make(2, 1, 1, 3, 3, 0.1, 0, 0);
  EXPECT_NEAR(optimal_bias_thm3(p), -2.0 * 2.0 / 4.0, 1e-14);
  p.k = p.gamma = 2.0;
  EXPECT_NEAR(optimal_bias_thm3(p), -2.0 * 1.0 / 3.0, 1e-14);
  const TheoryParams f = mixed_case();
  const double g = oracle::grid_argmin(
      [&](double x) { return objective_oracle(f, -f.epsilon * f.rho_plus, f.epsilon * f.rho_minus, x); }, -3, 3, 1e-4);
  EXPECT_NEAR(optimal_bias_thm3(f), g, 1e-4);
}

TEST(Preconditions, Errors) {
  TheoryParams p = imbalance_case();
  p.k = 1;
  EXPECT_THROW(optimal_bias_thm3(p), SingularParameterError);
  p = mixed_case();
  EXPECT_THROW(optimal_bias_thm1(p), std::invalid_argument);
  p = imbalance_case();
  p.rho_plus = 5;  // rho_plus * eps == eta
  EXPECT_THROW(errors_thm1(p), InfeasibleParameterError);
  // Negative radicand: K < gamma with a small mean gap.
  p = make(1, 0.1, 1, 8, 1.5, 0, 0, 0);
  EXPECT_THROW(optimal_bias_thm3(p), InfeasibleParameterError);
  // A = 0 can be reached inside the feasible region once eps > (2d - 1) eta.
  p = make(1, 1, 1, 2, 1, 1.5, 1.0 / 3.0, 1);
  EXPECT_THROW(errors_thm1(p), SingularParameterError);
  p = imbalance_case();
  p.sigma = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = imbalance_case();
  p.gamma = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Theory, ANegativeInFeasibleRegion) {
  RngStream rng(32, 0);
  for (int i = 0; i < 500; ++i) {
    const TheoryParams p = random_feasible(rng, Theorem::one);
    if (p.epsilon > (2 * p.d - 1) * p.eta) continue;
    EXPECT_LT(p.epsilon - 2 * p.d * p.eta + p.epsilon * p.rho_plus, 0.0);
  }
}

TEST(Theory, DegenerateSymmetry) {
  RngStream rng(33, 0);
  for (int i = 0; i < 50; ++i) {
    TheoryParams p = random_feasible(rng, Theorem::one);
    p.gamma = 1;
    p.rho_plus = 1;
    if (!is_feasible(p, Theorem::one)) continue;
    const ErrorPair e = errors_thm1(p);
    EXPECT_NEAR(e.err_plus, e.err_minus, 1e-12);
  }
}

TEST(Theory, PerturbationShifts) {
  const TheoryParams p = make(2, 1, 1, 2, 3, 0.2, 2, 3);
  ClassShifts s = perturbation_shifts(p, Theorem::one);
  EXPECT_DOUBLE_EQ(s.plus, -0.4);
  EXPECT_DOUBLE_EQ(s.minus, 0.2);
  s = perturbation_shifts(p, Theorem::two);
  EXPECT_DOUBLE_EQ(s.plus, -0.2);
  EXPECT_NEAR(s.minus, -0.6, 1e-15);
  s = perturbation_shifts(p, Theorem::three);
  EXPECT_DOUBLE_EQ(s.plus, -0.4);
  EXPECT_NEAR(s.minus, 0.6, 1e-15);
}

TEST(Thm3BiasSlope, MatchesFiniteDifference) {
  RngStream rng(34, 0);
  for (int i = 0; i < 50; ++i) {
    const TheoryParams p = random_feasible(rng, Theorem::three);
    for (bool plus : {true, false}) {
      const double h = 1e-6;
      TheoryParams up = p, down = p;
      (plus ? up.rho_plus : up.rho_minus) += h;
      (plus ? down.rho_plus : down.rho_minus) -= h;
      if (!is_feasible(up, Theorem::three) || !is_feasible(down, Theorem::three)) continue;
      const double fd = (optimal_bias_thm3(up) - optimal_bias_thm3(down)) / (2 * h);
      EXPECT_NEAR(thm3_bias_slope(p, plus), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Corollaries, Examples) {
  const CorollaryConditions c = corollary_conditions(imbalance_case());
  EXPECT_NEAR(c.cor1_gamma_threshold, std::exp(1.96), 1e-12);
  EXPECT_NEAR(c.cor1_gamma_threshold, 7.10, 5e-3);
  EXPECT_TRUE(c.cor1_applies);
  TheoryParams p = imbalance_case();
  p.gamma = 1;
  EXPECT_FALSE(corollary_conditions(p).cor2_applies);
  EXPECT_TRUE(corollary_conditions(make(2, 1, 1, 1.1, 2.5, 0.2, 1, 1)).cor3_variance_dominant);
  const CorollaryConditions c6 = corollary_conditions(mixed_case());
  EXPECT_NEAR(c6.cor3_window_low, 3 * std::exp(3.9 * 3.9 / 36), 1e-12);
  EXPECT_NEAR(c6.cor3_window_high, 3 * std::exp(4.0 / 8.0), 1e-12);
}

TEST(Corollaries, Cor1And2Monotonicity) {
  RngStream rng(35, 0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    TheoryParams p = random_feasible(rng, Theorem::one);
    if (!corollary_conditions(p).cor1_applies || p.epsilon == 0) continue;
    ++checked;
    for (Theorem t : {Theorem::one, Theorem::two}) {
      double prev_plus = 2, prev_minus = -1;
      for (int j = 0; j < 40; ++j) {
        (t == Theorem::one ? p.rho_plus : p.rho_minus) = 0.999 * j / 40.0 * p.eta / p.epsilon;
        if (!is_feasible(p, t)) break;
        const ErrorPair e = closed_form_errors(p, t);
        EXPECT_LE(e.err_plus, prev_plus + 1e-12) << p.describe();
        EXPECT_GE(e.err_minus, prev_minus - 1e-12) << p.describe();
        prev_plus = e.err_plus;
        prev_minus = e.err_minus;
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Corollaries, Thm3DirectionFollowsBiasSlope) {
  // A rising optimal bias moves the boundary toward class -1.
  RngStream rng(36, 0);
  for (int i = 0; i < 100; ++i) {
    TheoryParams p = random_feasible(rng, Theorem::three);
    for (bool plus : {true, false}) {
      TheoryParams q = p;
      (plus ? q.rho_plus : q.rho_minus) += 0.01;
      if (!is_feasible(q, Theorem::three)) continue;
      const double slope = thm3_bias_slope(p, plus);
      if (std::abs(slope) < 1e-3) continue;
      const ErrorPair a = errors_thm3(p), b = errors_thm3(q);
      if (slope > 0) {
        EXPECT_LT(b.err_plus, a.err_plus);
        EXPECT_GT(b.err_minus, a.err_minus);
      } else {
        EXPECT_GT(b.err_plus, a.err_plus);
        EXPECT_LT(b.err_minus, a.err_minus);
      }
    }
  }
}

TEST(Corollaries, Cor3WindowIsNotSufficient) {
  // Inside the stated class-imbalance window, yet err_plus rises with rho_plus.
  const TheoryParams p = make(1, 1.69116, 1.29345, 33.3346, 1.34001, 0.192338, 0.0392215, 0.249621);
  ASSERT_TRUE(is_feasible(p, Theorem::three));
  ASSERT_TRUE(corollary_conditions(p).cor3_class_imbalance_window);
  EXPECT_LT(thm3_bias_slope(p, true), 0.0);
  TheoryParams q = p;
  q.rho_plus += 0.01;
  ASSERT_TRUE(is_feasible(q, Theorem::three));
  EXPECT_GT(errors_thm3(q).err_plus, errors_thm3(p).err_plus);
}

TEST(GridSearch, PrefersInteriorLocalMinimum) {
  // Global minimum at the left edge, interior local minimum at 1.
  auto f = [](double x) { return x < 0.5 ? x : (x - 1) * (x - 1); };
  const GridSearchResult g = grid_search_minimum(f, -1, 3, 1e-3);
  EXPECT_TRUE(g.interior);
  EXPECT_NEAR(g.argmin, 1.0, 1e-9);
  const GridSearchResult mono = grid_search_minimum([](double x) { return x; }, 0, 1, 0.1);
  EXPECT_FALSE(mono.interior);
  EXPECT_EQ(mono.argmin, 0.0);
  const GridSearchResult fine =
      refined_grid_search([](double x) { return (x - 0.123456) * (x - 0.123456); }, -1, 1, 1e-2, 1e-6);
  EXPECT_NEAR(fine.argmin, 0.123456, 1e-6);
}

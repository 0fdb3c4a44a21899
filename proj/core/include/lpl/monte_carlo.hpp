#pragma once

#include <cstddef>
#include <vector>

#include "lpl/rng.hpp"
#include "lpl/theory.hpp"

namespace lpl {

/// Projections w^T x = sum_i x_i of sampled points, one vector per class.
/// Points are drawn in full d dimensions and then summed, so the sample
/// matches the data model rather than its one-dimensional shortcut.
struct McSample {
  std::vector<double> plus;
  std::vector<double> minus;
};

/// Draws n points per class. Shards use independent child streams of `rng`,
/// so the result depends only on (rng identity, n, shards).
McSample mc_sample(const TheoryParams& p, std::size_t n, const RngStream& rng, std::size_t shards = 1);

struct McErrorEstimate {
  /// Errors of sign(sum x + b) on the raw samples.
  ErrorPair natural;
  /// Errors after the theorem's worst/best-case class shifts.
  ErrorPair perturbed;
  /// Binomial standard errors sqrt(p (1 - p) / n) of the natural errors.
  double se_minus = 0.0;
  double se_plus = 0.0;
  std::size_t n = 0;
};

/// Minimum per-class sample count accepted by mc_error_estimate.
inline constexpr std::size_t kMinMcSamples = 10000;

McErrorEstimate mc_error_estimate(const TheoryParams& p, Theorem theorem, double bias, std::size_t n,
                                  const RngStream& rng, std::size_t shards = 1);
McErrorEstimate mc_error_estimate(const McSample& sample, const TheoryParams& p, Theorem theorem, double bias);

struct McBiasSearch {
  double argmin = 0.0;
  /// Empirical err_plus + gamma * err_minus at argmin (perturbed).
  double value = 0.0;
};

/// Global argmin over b in [lo, hi] (step `step`) of the empirical perturbed
/// objective. Ties resolve to the smallest b.
McBiasSearch mc_grid_search_bias(const McSample& sample, const TheoryParams& p, Theorem theorem, double lo = -5.0,
                                 double hi = 5.0, double step = 1e-3);

}  // namespace lpl

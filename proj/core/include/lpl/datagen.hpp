#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpl/batch.hpp"
#include "lpl/rng.hpp"
#include "lpl/theory.hpp"

namespace lpl {

/// Where a dataset came from: generator name, its parameters and seed.
struct Provenance {
  std::string generator;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Feature rows with one-hot or multi-hot target rows. Classes are indexed
/// head first wherever a generator controls the order.
struct Dataset {
  TaskKind kind = TaskKind::single_label;
  Eigen::MatrixXd features;           // N x d
  std::vector<RealVec> targets;       // N rows of length C
  ClassProfile profile;
  Provenance provenance;

  std::size_t size() const noexcept { return targets.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
  std::size_t num_classes() const noexcept { return targets.empty() ? profile.num_classes() : targets.front().size(); }
  std::size_t label(std::size_t i) const;

  /// Recomputes `profile` from the targets.
  void refresh_profile();
  /// Shapes, finiteness, encoding, and profile/tally agreement.
  void validate() const;
  /// Rows in `idx` order, same profile semantics.
  Dataset subset(const std::vector<std::size_t>& idx) const;
};

/// Binary theory model as a two-class dataset. Class 0 is y = -1 (the
/// majority, ceil(gamma * n_plus) samples from N(-theta, (K sigma)^2 I)),
/// class 1 is y = +1 (n_plus samples from N(theta, sigma^2 I)).
Dataset gen_gaussian_binary(const TheoryParams& p, std::size_t n_plus, RngStream& rng);

/// Class c (0-based) gets round(n_head * ratio^(-c / (C - 1))) samples from
/// N(mu_c, I). Means have pairwise distance >= separation: scaled simplex
/// vertices when d >= C, a circle when 2 <= d < C, a line when d = 1.
Dataset gen_longtail_multiclass(std::size_t num_classes, double imbalance_ratio, std::size_t n_head, std::size_t d,
                                double separation, RngStream& rng);

/// Geometric positive-frequency profile p_c = head_frac * r^c with r chosen
/// so that sum p_c = label_density * C. Throws when no r in (0, 1] does it.
std::vector<double> multilabel_frequencies(std::size_t num_classes, double head_frac, double label_density);

/// Multi-label data: features are the sum of the active classes' prototypes
/// plus N(0, I) noise. Every sample has at least one positive label.
/// Prototypes are drawn from a stream fixed by rng.seed() alone.
Dataset gen_multilabel(std::size_t num_classes, std::size_t n, double head_frac, double label_density,
                       RngStream& rng, std::size_t d = 0, double prototype_scale = 2.0);

}  // namespace lpl

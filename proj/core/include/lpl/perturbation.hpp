#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lpl/baselines.hpp"
#include "lpl/batch.hpp"
#include "lpl/math.hpp"

namespace lpl {

/// How the category set is split into positively / negatively augmented sets.
enum class SplitMode {
  balanced_performance,  // by mean confidence against a threshold
  longtail_index,        // by class rank against an index threshold
  multilabel,            // per-class binary tasks, index threshold
};

enum class BoundForm { absolute_difference, ratio };

/// Maximize raises the class loss (positive augmentation); minimize lowers it.
enum class Direction { maximize, minimize };

/// Everything the inner optimization needs besides the logits.
struct PerturbationSpec {
  SplitMode mode = SplitMode::balanced_performance;
  /// Confidence threshold (performance mode) or 1-based class index threshold.
  double tau = 0.0;
  double epsilon = 0.0;
  double delta_epsilon = 0.0;
  double alpha = 0.01;

  bool disabled() const noexcept { return epsilon + delta_epsilon == 0.0; }
  void validate(std::size_t num_classes) const;
};

/// P_a / N_a membership. `positive[c]` is true for positively augmented classes.
struct CategorySplit {
  std::vector<bool> positive;

  std::size_t num_classes() const noexcept { return positive.size(); }
  bool is_positive(std::size_t c) const { return positive.at(c); }
  std::vector<std::size_t> positive_set() const;
  std::vector<std::size_t> negative_set() const;
};

/// Per-class bound and the PGD step count derived from it.
struct BoundVector {
  RealVec bounds;
  std::vector<std::size_t> steps;
};

/// Mean confidence per class; nullopt for classes absent from the batch.
using ConfidenceVec = std::vector<std::optional<double>>;

/// Single-label: mean of softmax(u_i)_c over samples of class c.
ConfidenceVec class_mean_confidence(const LogitBatch& batch);
/// Multi-label analogue: mean of sigmoid(u_ic) over the positives of class c.
ConfidenceVec class_mean_confidence_multilabel(const LogitBatch& batch);

/// c is positively augmented iff tau - q_c >= 0. Missing classes go to P_a.
CategorySplit split_by_performance(const ConfidenceVec& confidence, double tau);

/// Classes are ranked head-first; 0-based class c has rank c + 1 and is
/// positively augmented iff (c + 1) - tau >= 0.
CategorySplit split_by_index(std::size_t num_classes, double tau);

/// floor(bound / alpha). Ratios within 1e-9 of an integer round to it so
/// that e.g. 0.3 / 0.1 yields 3.
std::size_t step_count(double bound, double alpha);

/// Absolute-difference form: eps + d_eps * |tau - q_c|.
/// Ratio form (index threshold): eps + d_eps * q_c / q_1 for rank <= tau,
/// eps + d_eps * q_C / q_c otherwise.
BoundVector compute_bounds(const ConfidenceVec& confidence, double tau, const PerturbationSpec& spec,
                           BoundForm form);

/// Bound form used by each split mode: absolute difference for the
/// performance split, ratio for the index-based splits.
BoundForm default_bound_form(SplitMode mode) noexcept;

/// Class-shared offset from `steps` ascent (maximize) or descent (minimize)
/// steps of size alpha along the mean CE logit gradient of the class members.
/// Every sample in `logits` belongs to class `cls`.
RealVec pgd_perturb_steps(std::span<const RealVec> logits, std::size_t cls, std::size_t steps, double alpha,
                          Direction direction);
RealVec pgd_perturb(std::span<const RealVec> logits, std::size_t cls, double bound, double alpha,
                    Direction direction);

struct LplResult {
  double loss = 0.0;
  /// One offset per class; zero vector for classes absent from the batch.
  std::vector<RealVec> class_offsets;
  std::vector<bool> present;
};

/// Single-label LPL loss: per-class PGD offsets (maximize on P_a, minimize on
/// N_a) and the mean perturbed CE.
LplResult lpl_loss_single(const LogitBatch& batch, const CategorySplit& split, const BoundVector& bounds,
                          double alpha);

/// Logit adjustment followed by LPL on the shifted logits. Returned offsets
/// include the adjustment term.
LplResult combined_la_lpl_loss(const LogitBatch& batch, const ClassProfile& profile, double lambda,
                               const CategorySplit& split, const BoundVector& bounds, double alpha);

/// Signed class offset for multi-label LPL: +bound when rank(c) >= tau,
/// -bound otherwise. Applied as log(1 + e^{-u + d}) / log(1 + e^{u - d}).
double multilabel_delta(std::size_t cls, double tau, double bound);
RealVec multilabel_deltas(std::size_t num_classes, double tau, const BoundVector& bounds);

double lpl_loss_multilabel(const LogitBatch& batch, double tau, const BoundVector& bounds);
/// Per-sample offsets equivalent to the multi-label LPL loss (u - delta_c).
std::vector<RealVec> multilabel_lpl_offsets(const LogitBatch& batch, double tau, const BoundVector& bounds);

}  // namespace lpl

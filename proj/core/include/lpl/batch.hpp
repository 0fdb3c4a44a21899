#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpl/math.hpp"

namespace lpl {

enum class TaskKind { single_label, multi_label };

/// Logit vectors with one-hot (single-label) or multi-hot (multi-label)
/// targets. Row i of `logits` pairs with row i of `targets`.
struct LogitBatch {
  TaskKind kind = TaskKind::single_label;
  std::vector<RealVec> logits;
  std::vector<RealVec> targets;

  static LogitBatch single_label(std::vector<RealVec> logits, std::span<const std::size_t> labels);
  static LogitBatch multi_label(std::vector<RealVec> logits, std::vector<RealVec> targets);

  std::size_t size() const noexcept { return logits.size(); }
  std::size_t num_classes() const noexcept { return logits.empty() ? 0 : logits.front().size(); }

  /// Class index of sample i; single-label batches only.
  std::size_t label(std::size_t i) const;
  bool positive(std::size_t i, std::size_t c) const { return targets[i][c] == 1.0; }

  /// Shape, finiteness and target-encoding checks.
  void validate() const;
};

/// Per-class sample statistics.
///
/// Single-label: counts[c] = N_c and priors sum to one. Multi-label: counts[c]
/// is the number of positive samples of class c out of `total` samples, so the
/// priors may sum to more than one.
struct ClassProfile {
  TaskKind kind = TaskKind::single_label;
  std::size_t total = 0;
  std::vector<std::size_t> counts;
  std::vector<double> priors;
  /// Set when priors are non-increasing in class index (head first).
  bool descending = false;

  /// Single-label: total = sum of counts. Multi-label: total must be given.
  static ClassProfile from_counts(std::vector<std::size_t> counts,
                                  TaskKind kind = TaskKind::single_label,
                                  std::size_t total = 0);
  static ClassProfile from_batch(const LogitBatch& batch);

  std::size_t num_classes() const noexcept { return counts.size(); }
  void validate() const;
};

/// Class partition into head / medium / tail thirds by count rank (ties keep
/// class order). Returned values are 0, 1, 2 per class.
std::vector<int> tercile_buckets(const ClassProfile& profile);
const char* bucket_name(int bucket);

}  // namespace lpl

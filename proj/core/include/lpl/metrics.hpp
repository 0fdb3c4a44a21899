#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "lpl/batch.hpp"
#include "lpl/datagen.hpp"
#include "lpl/model.hpp"

namespace lpl {

struct EvalMetrics {
  TaskKind kind = TaskKind::single_label;
  /// Single-label: argmax error. Multi-label: fraction of samples whose
  /// top-scoring class is not a positive.
  double top1_error = 0.0;
  /// Single-label: error over class-c samples. Multi-label: sign(u) error of
  /// class c over all samples. Missing when the class has no samples.
  std::vector<std::optional<double>> class_error;
  /// Multi-label only: per-class AP (missing without positives) and their mean.
  std::vector<std::optional<double>> ap;
  std::optional<double> map;
};

/// Mean of precision@rank over the ranks of the positives, ranking by score
/// descending (ties broken by index). Missing when there are no positives.
std::optional<double> average_precision(const std::vector<double>& scores, const std::vector<bool>& positive);

/// Metrics from raw logits; no perturbation is ever applied here.
EvalMetrics evaluate_logits(TaskKind kind, const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets);
EvalMetrics evaluate(const ModelParams& model, const Dataset& data);

}  // namespace lpl

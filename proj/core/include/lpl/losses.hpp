#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "lpl/batch.hpp"
#include "lpl/math.hpp"

namespace lpl {

/// Training-time perturbation. Every method is expressed as per-sample logit
/// offsets added before the loss, so `none` is the zero-offset case.
enum class Method { none, la, isda, ldam, ntr, lc, lpl, la_lpl };

Method method_from_string(const std::string& name);
const char* method_name(Method m);
/// Whether the method is defined for the task kind.
bool method_supports(Method m, TaskKind kind);

struct LossEval {
  double loss = 0.0;
  Eigen::MatrixXd dlogits;  // N x C, gradient of `loss` w.r.t. the raw logits
};

/// Mean CE (single-label) or mean binary logistic loss over N x C entries
/// (multi-label) of logits + offsets. Offsets are constants: their gradient
/// flows to the logits unchanged.
LossEval offset_loss(TaskKind kind, const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets,
                     const Eigen::MatrixXd& offsets);

/// Negative-tolerant binary loss with z = u + shift_c:
/// positives log(1 + e^{-z}), negatives log(1 + e^{lambda z}) / lambda.
LossEval ntr_offset_loss(const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets, const RealVec& shift,
                         double lambda);

/// Per-entry loss table (N x 1 single-label, N x C multi-label) of
/// logits + offsets, matching baselines' LossTable.
std::vector<RealVec> offset_loss_table(TaskKind kind, const Eigen::MatrixXd& logits,
                                       const std::vector<RealVec>& targets, const Eigen::MatrixXd& offsets);
std::vector<RealVec> ntr_loss_table(const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets,
                                    const RealVec& shift, double lambda);

Eigen::MatrixXd to_matrix(const std::vector<RealVec>& rows, std::size_t cols);
std::vector<RealVec> to_rows(const Eigen::MatrixXd& m);

}  // namespace lpl

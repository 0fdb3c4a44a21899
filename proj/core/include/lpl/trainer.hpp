#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpl/baselines.hpp"
#include "lpl/datagen.hpp"
#include "lpl/losses.hpp"
#include "lpl/metrics.hpp"
#include "lpl/model.hpp"
#include "lpl/perturbation.hpp"

namespace lpl {

enum class TauRule { fixed, running_mean };

TauRule tau_rule_from_string(const std::string& name);
SplitMode split_mode_from_string(const std::string& name);
const char* split_mode_name(SplitMode m);

struct TrainConfig {
  Architecture arch = Architecture::linear;
  std::size_t hidden = 16;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  double learning_rate = 0.1;
  double momentum = 0.0;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;

  Method method = Method::none;
  double la_lambda = 1.0;
  double isda_strength = 0.5;
  /// Multiplier of the LDAM margin; the effective margin is scale * C.
  double ldam_scale = 1.0;
  double ntr_lambda = 2.0;
  double ntr_psi = 1.0;
  LcParams lc;

  PerturbationSpec lpl;
  /// Performance split only: running_mean sets tau to the mean of the
  /// smoothed class confidences before every step.
  TauRule tau_rule = TauRule::fixed;
  double confidence_momentum = 0.9;

  void validate(TaskKind kind, std::size_t num_classes) const;
};

/// Mutable per-run state of the LPL statistics.
struct LplState {
  /// Smoothed class confidences, initialised to 1/C.
  RealVec q_bar;
  double tau = 0.0;
};

/// Offsets the method applies to one mini-batch. LPL offsets come from the
/// current logits; all offsets are constants for the parameter gradient.
struct BatchPerturbation {
  Eigen::MatrixXd offsets;  // N x C; unused for NTR
  bool ntr = false;
  RealVec ntr_shift;
  /// Positive-augmentation flag per class for LPL, empty otherwise.
  std::vector<bool> split;
};

BatchPerturbation compute_perturbation(const TrainConfig& cfg, const ClassProfile& profile, const ModelParams& model,
                                       const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets,
                                       TaskKind kind, LplState& state,
                                       const std::vector<Eigen::MatrixXd>* isda_covariances);

/// Per-class covariance of the output layer's inputs (ML estimate), the
/// ISDA covariance source at desk scale.
std::vector<Eigen::MatrixXd> class_feature_covariances(const ModelParams& model, const Dataset& data);

/// Perturbed loss and its parameter gradient for fixed offsets.
struct LossGradient {
  double loss = 0.0;
  ModelParams grad;
};
LossGradient model_loss_gradient(const ModelParams& model, const Eigen::MatrixXd& x,
                                 const std::vector<RealVec>& targets, TaskKind kind,
                                 const BatchPerturbation& perturbation, double ntr_lambda = 1.0);

/// Per-class relative loss variation aggregated over one epoch.
struct VariationRecord {
  std::size_t epoch = 0;
  std::vector<ClassVariation> classes;
};

struct HistoryRow {
  std::size_t epoch = 0;
  std::string split;  // train / test
  std::optional<std::size_t> cls;  // empty = all classes
  std::string metric;
  double value = 0.0;
};

struct TrainResult {
  ModelParams model;
  std::vector<HistoryRow> history;
  std::vector<VariationRecord> variation;
  LplState lpl_state;
  EvalMetrics final_train;
  std::optional<EvalMetrics> final_test;
};

/// Mini-batch SGD with the configured perturbation. Throws DivergenceError
/// on a non-finite loss or parameter. Deterministic given cfg.seed.
TrainResult train(const TrainConfig& cfg, const Dataset& train_set, const Dataset* test_set = nullptr);

/// Header: epoch,split,class,metric,value
void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history);

}  // namespace lpl

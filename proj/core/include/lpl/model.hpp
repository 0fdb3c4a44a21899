#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "lpl/rng.hpp"

namespace lpl {

enum class Architecture { linear, mlp };

Architecture architecture_from_string(const std::string& name);
const char* architecture_name(Architecture a);

/// Linear: logits = X W1^T + b1 (W1 is C x d).
/// MLP:    h = relu(X W1^T + b1) (W1 is H x d), logits = h W2^T + b2 (W2 is C x H).
/// Gradients use the same struct.
struct ModelParams {
  Architecture arch = Architecture::linear;
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  std::size_t classes = 0;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;

  /// Linear: small Gaussian weights, zero biases. MLP: He initialisation.
  static ModelParams init(Architecture arch, std::size_t input_dim, std::size_t hidden, std::size_t classes,
                          RngStream& rng);
  /// Same shapes, all zeros.
  ModelParams zeros_like() const;

  std::size_t num_params() const;
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& flat);

  bool all_finite() const;
  void validate() const;
};

struct ForwardCache {
  Eigen::MatrixXd pre;     // MLP hidden pre-activation, N x H
  Eigen::MatrixXd hidden;  // MLP hidden activation, N x H
  Eigen::MatrixXd logits;  // N x C
};

ForwardCache forward(const ModelParams& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd predict_logits(const ModelParams& model, const Eigen::MatrixXd& x);
/// Input of the output layer: x itself (linear) or the hidden activation.
Eigen::MatrixXd penultimate(const ModelParams& model, const Eigen::MatrixXd& x);

/// Parameter gradient given dL/dlogits.
ModelParams backward(const ModelParams& model, const ForwardCache& cache, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& dlogits);

/// Text dump: `lpl-model 1`, `arch`, `dims d hidden C`, then each tensor as
/// `name rows cols` followed by its values row by row.
void save_model(std::ostream& os, const ModelParams& model);
ModelParams load_model(std::istream& is);

}  // namespace lpl

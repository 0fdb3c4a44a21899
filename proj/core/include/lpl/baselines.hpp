#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lpl/batch.hpp"
#include "lpl/math.hpp"

namespace lpl {

/// Class covariances and logit weights that define the implicit
/// semantic-augmentation offset.
struct IsdaInputs {
  /// One symmetric PSD matrix per class, each d x d.
  std::vector<Eigen::MatrixXd> covariances;
  /// Row c holds w_c (C x d).
  Eigen::MatrixXd weights;
  double strength = 0.0;

  void validate() const;
};

/// Externally supplied logit-compensation means. Variances are not modelled.
struct LcParams {
  RealVec mean_pos;
  RealVec mean_neg;
};

// Offsets. Each returns a length-C vector meant to be added to the logits.

/// Logit adjustment: lambda * log(pi_c). Corpus-level.
RealVec la_offset(const ClassProfile& profile, double lambda);

/// (lambda/2) (w_c - w_k)^T Sigma_k (w_c - w_k) for every c; zero at k.
RealVec isda_offset(const IsdaInputs& inputs, std::size_t k);

/// -margin * pi_k^{-1/4} at index k, zero elsewhere. `margin` is the single
/// multiplicative knob (scale times the margin constant).
RealVec ldam_offset(const ClassProfile& profile, std::size_t k, double margin);
/// Default margin knob: the class count.
double default_ldam_margin(const ClassProfile& profile);

/// -psi * log(N / N_c - 1). Corpus-level.
RealVec ntr_offset(const ClassProfile& profile, double psi);

// Losses. All are means over samples (and classes for binary losses).

double mean_cross_entropy(const LogitBatch& batch);
double mean_binary_loss(const LogitBatch& batch);

/// Negative-tolerant binary loss on a multi-hot batch.
double ntr_loss(const LogitBatch& batch, const ClassProfile& profile, double lambda, double psi);

/// Logit-compensated binary loss with unit variances.
double lc_loss(const LogitBatch& batch, const LcParams& params);

/// Mean CE of u_i + offsets_i. Single-label batches.
double perturbed_ce(const LogitBatch& batch, std::span<const RealVec> offsets);

// Per-sample loss tables used by the loss-variation analysis.
// Single-label tables are N x 1 (the CE of the sample), multi-label tables
// are N x C (one binary loss per class).
using LossTable = std::vector<RealVec>;

/// l(u_i + offsets_i, y_i) for either task kind. Empty `offsets` means none.
LossTable perturbed_losses(const LogitBatch& batch, std::span<const RealVec> offsets);
LossTable ntr_losses(const LogitBatch& batch, const ClassProfile& profile, double lambda, double psi);
LossTable lc_losses(const LogitBatch& batch, const LcParams& params);

/// Per-sample offsets for class-level vectors: sample i receives
/// per_class[label(i)].
std::vector<RealVec> class_level_offsets(const LogitBatch& batch, std::span<const RealVec> per_class);
/// Same offset for every sample.
std::vector<RealVec> corpus_level_offsets(const LogitBatch& batch, const RealVec& offset);
/// LC offsets: mean_pos where y = 1 and mean_neg where y = 0.
std::vector<RealVec> lc_offsets(const LogitBatch& batch, const LcParams& params);

/// Relative loss variation (l' - l) / l of one class. Missing when the class
/// has no samples of that kind.
struct ClassVariation {
  std::optional<double> all;
  std::optional<double> positive;  // multi-label only
  std::optional<double> negative;  // multi-label only
  std::size_t n_all = 0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  double base_loss = 0.0;
  double perturbed_loss = 0.0;
};

std::vector<ClassVariation> relative_loss_variation(const LogitBatch& batch, const LossTable& base,
                                                    const LossTable& perturbed);
std::vector<ClassVariation> relative_loss_variation(const LogitBatch& batch,
                                                    std::span<const RealVec> offsets);

}  // namespace lpl

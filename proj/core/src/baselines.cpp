#include "lpl/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lpl {
namespace {

void require_kind(const LogitBatch& batch, TaskKind kind, const char* what) {
  if (batch.kind != kind) {
    throw std::invalid_argument(std::string(what) +
                                (kind == TaskKind::single_label ? ": requires a single-label batch"
                                                                : ": requires a multi-label batch"));
  }
}

void require_offsets(const LogitBatch& batch, std::span<const RealVec> offsets, const char* what) {
  if (offsets.size() != batch.size()) {
    throw std::invalid_argument(std::string(what) + ": one offset vector per sample expected");
  }
  for (const RealVec& o : offsets) {
    if (o.size() != batch.num_classes()) {
      throw std::invalid_argument(std::string(what) + ": offset length differs from class count");
    }
    require_finite(o, what);
  }
}

RealVec add(std::span<const double> a, std::span<const double> b) {
  RealVec out(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) out[c] = a[c] + b[c];
  return out;
}

double mean_of(const LossTable& table) {
  double s = 0.0;
  std::size_t n = 0;
  for (const RealVec& row : table) {
    for (double v : row) {
      s += v;
      ++n;
    }
  }
  return n == 0 ? 0.0 : s / static_cast<double>(n);
}

}  // namespace

void IsdaInputs::validate() const {
  const auto classes = static_cast<std::size_t>(weights.rows());
  if (covariances.size() != classes) throw std::invalid_argument("isda: one covariance per class expected");
  if (!(strength >= 0.0) || !std::isfinite(strength)) throw std::invalid_argument("isda: strength must be >= 0");
  for (const auto& s : covariances) {
    if (s.rows() != weights.cols() || s.cols() != weights.cols()) {
      throw std::invalid_argument("isda: covariance dimension differs from feature dimension");
    }
    if (s.size() > 0 && (s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw std::invalid_argument("isda: covariance is not symmetric");
    }
    if (s.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() < -1e-9) throw std::invalid_argument("isda: covariance is not PSD");
    }
  }
}

RealVec la_offset(const ClassProfile& profile, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("la_offset: lambda must be finite");
  RealVec out(profile.num_classes());
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (!(profile.priors[c] > 0.0)) throw std::invalid_argument("la_offset: prior must be positive");
    out[c] = lambda * std::log(profile.priors[c]);
  }
  return out;
}

RealVec isda_offset(const IsdaInputs& inputs, std::size_t k) {
  inputs.validate();
  const auto classes = static_cast<std::size_t>(inputs.weights.rows());
  if (k >= classes) throw std::invalid_argument("isda_offset: class index out of range");
  const Eigen::MatrixXd& sigma = inputs.covariances[k];
  RealVec out(classes, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    if (c == k) continue;
    const Eigen::VectorXd diff =
        (inputs.weights.row(static_cast<Eigen::Index>(c)) - inputs.weights.row(static_cast<Eigen::Index>(k)))
            .transpose();
    out[c] = 0.5 * inputs.strength * diff.dot(sigma * diff);
  }
  return out;
}

RealVec ldam_offset(const ClassProfile& profile, std::size_t k, double margin) {
  if (k >= profile.num_classes()) throw std::invalid_argument("ldam_offset: class index out of range");
  const double pi = profile.priors[k];
  if (!(pi > 0.0)) throw std::invalid_argument("ldam_offset: prior must be positive");
  RealVec out(profile.num_classes(), 0.0);
  out[k] = -margin * std::pow(pi, -0.25);
  return out;
}

double default_ldam_margin(const ClassProfile& profile) {
  return static_cast<double>(profile.num_classes());
}

RealVec ntr_offset(const ClassProfile& profile, double psi) {
  RealVec out(profile.num_classes());
  const double n = static_cast<double>(profile.total);
  for (std::size_t c = 0; c < out.size(); ++c) {
    const std::size_t nc = profile.counts[c];
    if (nc == 0 || nc >= profile.total) {
      throw std::invalid_argument("ntr_offset: requires 0 < N_c < N for every class");
    }
    out[c] = -psi * std::log(n / static_cast<double>(nc) - 1.0);
  }
  return out;
}

double mean_cross_entropy(const LogitBatch& batch) {
  require_kind(batch, TaskKind::single_label, "mean_cross_entropy");
  return mean_of(perturbed_losses(batch, {}));
}

double mean_binary_loss(const LogitBatch& batch) {
  require_kind(batch, TaskKind::multi_label, "mean_binary_loss");
  return mean_of(perturbed_losses(batch, {}));
}

LossTable perturbed_losses(const LogitBatch& batch, std::span<const RealVec> offsets) {
  batch.validate();
  if (!offsets.empty()) require_offsets(batch, offsets, "perturbed_losses");
  LossTable out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const RealVec u = offsets.empty() ? batch.logits[i] : add(batch.logits[i], offsets[i]);
    if (batch.kind == TaskKind::single_label) {
      out[i] = {cross_entropy(u, batch.targets[i])};
    } else {
      out[i].resize(u.size());
      for (std::size_t c = 0; c < u.size(); ++c) out[i][c] = binary_logistic_loss(u[c], batch.positive(i, c));
    }
  }
  return out;
}

double perturbed_ce(const LogitBatch& batch, std::span<const RealVec> offsets) {
  require_kind(batch, TaskKind::single_label, "perturbed_ce");
  require_offsets(batch, offsets, "perturbed_ce");
  return mean_of(perturbed_losses(batch, offsets));
}

LossTable ntr_losses(const LogitBatch& batch, const ClassProfile& profile, double lambda, double psi) {
  require_kind(batch, TaskKind::multi_label, "ntr_loss");
  batch.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("ntr_loss: lambda must be positive");
  if (profile.num_classes() != batch.num_classes()) throw std::invalid_argument("ntr_loss: profile class count mismatch");
  // v_c = -offset_c
  const RealVec shift = ntr_offset(profile, psi);
  LossTable out(batch.size(), RealVec(batch.num_classes()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t c = 0; c < batch.num_classes(); ++c) {
      const double z = batch.logits[i][c] + shift[c];  // u - v
      out[i][c] = batch.positive(i, c) ? softplus(-z) : softplus(lambda * z) / lambda;
    }
  }
  return out;
}

double ntr_loss(const LogitBatch& batch, const ClassProfile& profile, double lambda, double psi) {
  return mean_of(ntr_losses(batch, profile, lambda, psi));
}

std::vector<RealVec> lc_offsets(const LogitBatch& batch, const LcParams& params) {
  require_kind(batch, TaskKind::multi_label, "lc_loss");
  if (params.mean_pos.size() != batch.num_classes() || params.mean_neg.size() != batch.num_classes()) {
    throw std::invalid_argument("lc_loss: parameter length differs from class count");
  }
  require_finite(params.mean_pos, "lc_loss");
  require_finite(params.mean_neg, "lc_loss");
  std::vector<RealVec> out(batch.size(), RealVec(batch.num_classes()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t c = 0; c < batch.num_classes(); ++c) {
      out[i][c] = batch.positive(i, c) ? params.mean_pos[c] : params.mean_neg[c];
    }
  }
  return out;
}

LossTable lc_losses(const LogitBatch& batch, const LcParams& params) {
  const auto offsets = lc_offsets(batch, params);
  return perturbed_losses(batch, offsets);
}

double lc_loss(const LogitBatch& batch, const LcParams& params) {
  return mean_of(lc_losses(batch, params));
}

std::vector<RealVec> class_level_offsets(const LogitBatch& batch, std::span<const RealVec> per_class) {
  require_kind(batch, TaskKind::single_label, "class_level_offsets");
  if (per_class.size() != batch.num_classes()) {
    throw std::invalid_argument("class_level_offsets: one vector per class expected");
  }
  std::vector<RealVec> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out.push_back(per_class[batch.label(i)]);
  return out;
}

std::vector<RealVec> corpus_level_offsets(const LogitBatch& batch, const RealVec& offset) {
  return std::vector<RealVec>(batch.size(), offset);
}

std::vector<ClassVariation> relative_loss_variation(const LogitBatch& batch, const LossTable& base,
                                                    const LossTable& perturbed) {
  if (base.size() != batch.size() || perturbed.size() != batch.size()) {
    throw std::invalid_argument("relative_loss_variation: loss tables differ from batch size");
  }
  const std::size_t classes = batch.num_classes();
  std::vector<ClassVariation> out(classes);
  if (batch.kind == TaskKind::single_label) {
    std::vector<double> b(classes, 0.0), p(classes, 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const std::size_t k = batch.label(i);
      b[k] += base[i].at(0);
      p[k] += perturbed[i].at(0);
      ++out[k].n_all;
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (out[c].n_all == 0) continue;
      const double n = static_cast<double>(out[c].n_all);
      out[c].base_loss = b[c] / n;
      out[c].perturbed_loss = p[c] / n;
      out[c].all = (p[c] - b[c]) / b[c];
    }
    return out;
  }

  std::vector<double> bp(classes, 0.0), pp(classes, 0.0), bn(classes, 0.0), pn(classes, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (base[i].size() != classes || perturbed[i].size() != classes) {
      throw std::invalid_argument("relative_loss_variation: multi-label tables must be N x C");
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (batch.positive(i, c)) {
        bp[c] += base[i][c];
        pp[c] += perturbed[i][c];
        ++out[c].n_positive;
      } else {
        bn[c] += base[i][c];
        pn[c] += perturbed[i][c];
        ++out[c].n_negative;
      }
    }
  }
  for (std::size_t c = 0; c < classes; ++c) {
    ClassVariation& v = out[c];
    v.n_all = v.n_positive + v.n_negative;
    if (v.n_positive > 0) v.positive = (pp[c] - bp[c]) / bp[c];
    if (v.n_negative > 0) v.negative = (pn[c] - bn[c]) / bn[c];
    if (v.n_all > 0) {
      const double b = bp[c] + bn[c];
      const double p = pp[c] + pn[c];
      v.base_loss = b / static_cast<double>(v.n_all);
      v.perturbed_loss = p / static_cast<double>(v.n_all);
      v.all = (p - b) / b;
    }
  }
  return out;
}

std::vector<ClassVariation> relative_loss_variation(const LogitBatch& batch,
                                                    std::span<const RealVec> offsets) {
  return relative_loss_variation(batch, perturbed_losses(batch, {}), perturbed_losses(batch, offsets));
}

}  // namespace lpl

#include "lpl/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace lpl {

void PerturbationSpec::validate(std::size_t num_classes) const {
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw std::invalid_argument("perturbation: epsilon must be >= 0");
  if (!std::isfinite(delta_epsilon) || delta_epsilon < 0.0) {
    throw std::invalid_argument("perturbation: delta_epsilon must be >= 0");
  }
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw std::invalid_argument("perturbation: alpha must be > 0");
  if (!std::isfinite(tau)) throw std::invalid_argument("perturbation: tau must be finite");
  if (mode != SplitMode::balanced_performance &&
      (tau < 0.0 || tau > static_cast<double>(num_classes) + 1.0)) {
    throw std::invalid_argument("perturbation: index threshold must lie in [0, C+1]");
  }
}

std::vector<std::size_t> CategorySplit::positive_set() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < positive.size(); ++c) {
    if (positive[c]) out.push_back(c);
  }
  return out;
}

std::vector<std::size_t> CategorySplit::negative_set() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < positive.size(); ++c) {
    if (!positive[c]) out.push_back(c);
  }
  return out;
}

ConfidenceVec class_mean_confidence(const LogitBatch& batch) {
  if (batch.kind != TaskKind::single_label) {
    throw std::invalid_argument("class_mean_confidence: single-label batch expected");
  }
  const std::size_t classes = batch.num_classes();
  std::vector<double> sum(classes, 0.0);
  std::vector<std::size_t> count(classes, 0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::size_t k = batch.label(i);
    sum[k] += softmax(batch.logits[i])[k];
    ++count[k];
  }
  ConfidenceVec out(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    if (count[c] > 0) out[c] = sum[c] / static_cast<double>(count[c]);
  }
  return out;
}

ConfidenceVec class_mean_confidence_multilabel(const LogitBatch& batch) {
  if (batch.kind != TaskKind::multi_label) {
    throw std::invalid_argument("class_mean_confidence_multilabel: multi-label batch expected");
  }
  const std::size_t classes = batch.num_classes();
  std::vector<double> sum(classes, 0.0);
  std::vector<std::size_t> count(classes, 0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      if (!batch.positive(i, c)) continue;
      sum[c] += sigmoid(batch.logits[i][c]);
      ++count[c];
    }
  }
  ConfidenceVec out(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    if (count[c] > 0) out[c] = sum[c] / static_cast<double>(count[c]);
  }
  return out;
}

CategorySplit split_by_performance(const ConfidenceVec& confidence, double tau) {
  CategorySplit split;
  split.positive.resize(confidence.size());
  for (std::size_t c = 0; c < confidence.size(); ++c) {
    split.positive[c] = !confidence[c].has_value() || tau - *confidence[c] >= 0.0;
  }
  return split;
}

CategorySplit split_by_index(std::size_t num_classes, double tau) {
  CategorySplit split;
  split.positive.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    split.positive[c] = static_cast<double>(c + 1) - tau >= 0.0;
  }
  return split;
}

std::size_t step_count(double bound, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("step_count: alpha must be > 0");
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw std::invalid_argument("step_count: bound must be >= 0");
  return static_cast<std::size_t>(std::floor(bound / alpha + 1e-9));
}

BoundForm default_bound_form(SplitMode mode) noexcept {
  return mode == SplitMode::balanced_performance ? BoundForm::absolute_difference : BoundForm::ratio;
}

BoundVector compute_bounds(const ConfidenceVec& confidence, double tau, const PerturbationSpec& spec,
                           BoundForm form) {
  spec.validate(confidence.size());
  const std::size_t classes = confidence.size();
  BoundVector out;
  out.bounds.assign(classes, spec.epsilon);
  if (spec.delta_epsilon > 0.0) {
    auto q = [&](std::size_t c) {
      if (!confidence[c]) throw std::invalid_argument("compute_bounds: confidence missing for a class");
      return *confidence[c];
    };
    if (form == BoundForm::absolute_difference) {
      for (std::size_t c = 0; c < classes; ++c) out.bounds[c] += spec.delta_epsilon * std::abs(tau - q(c));
    } else {
      if (spec.mode == SplitMode::balanced_performance) {
        throw std::invalid_argument("compute_bounds: ratio form needs an index threshold");
      }
      const double first = q(0);
      const double last = q(classes - 1);
      if (first == 0.0) throw std::invalid_argument("compute_bounds: zero head confidence in ratio form");
      for (std::size_t c = 0; c < classes; ++c) {
        const double qc = q(c);
        if (static_cast<double>(c + 1) <= tau) {
          out.bounds[c] += spec.delta_epsilon * qc / first;
        } else {
          if (qc == 0.0) throw std::invalid_argument("compute_bounds: zero confidence in ratio form");
          out.bounds[c] += spec.delta_epsilon * last / qc;
        }
      }
    }
  }
  out.steps.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) out.steps[c] = step_count(out.bounds[c], spec.alpha);
  return out;
}

RealVec pgd_perturb_steps(std::span<const RealVec> logits, std::size_t cls, std::size_t steps, double alpha,
                          Direction direction) {
  if (logits.empty()) throw std::invalid_argument("pgd_perturb: no samples for the class");
  if (!(alpha > 0.0)) throw std::invalid_argument("pgd_perturb: alpha must be > 0");
  const std::size_t classes = logits.front().size();
  if (cls >= classes) throw std::invalid_argument("pgd_perturb: class index out of range");
  const double sign = direction == Direction::maximize ? 1.0 : -1.0;
  const double scale = sign * alpha / static_cast<double>(logits.size());

  RealVec delta(classes, 0.0);
  RealVec shifted(classes);
  RealVec grad(classes);
  for (std::size_t k = 0; k < steps; ++k) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const RealVec& u : logits) {
      if (u.size() != classes) throw std::invalid_argument("pgd_perturb: ragged logits");
      for (std::size_t c = 0; c < classes; ++c) shifted[c] = u[c] + delta[c];
      const ProbVec p = softmax(shifted);
      for (std::size_t c = 0; c < classes; ++c) grad[c] += p[c];
      grad[cls] -= 1.0;
    }
    for (std::size_t c = 0; c < classes; ++c) delta[c] += scale * grad[c];
  }
  return delta;
}

RealVec pgd_perturb(std::span<const RealVec> logits, std::size_t cls, double bound, double alpha,
                    Direction direction) {
  return pgd_perturb_steps(logits, cls, step_count(bound, alpha), alpha, direction);
}

namespace {

LplResult lpl_on_logits(const LogitBatch& batch, const std::vector<RealVec>& logits, const CategorySplit& split,
                        const BoundVector& bounds, double alpha, const RealVec* base_offset) {
  const std::size_t classes = batch.num_classes();
  if (split.num_classes() != classes || bounds.steps.size() != classes) {
    throw std::invalid_argument("lpl_loss_single: split/bounds class count differs from batch");
  }
  std::vector<std::vector<RealVec>> members(classes);
  std::vector<std::size_t> labels(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    labels[i] = batch.label(i);
    members[labels[i]].push_back(logits[i]);
  }

  LplResult out;
  out.class_offsets.assign(classes, RealVec(classes, 0.0));
  out.present.assign(classes, false);
  for (std::size_t c = 0; c < classes; ++c) {
    if (members[c].empty()) continue;
    out.present[c] = true;
    out.class_offsets[c] = pgd_perturb_steps(members[c], c, bounds.steps[c], alpha,
                                             split.is_positive(c) ? Direction::maximize : Direction::minimize);
  }

  double total = 0.0;
  RealVec shifted(classes);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const RealVec& d = out.class_offsets[labels[i]];
    for (std::size_t c = 0; c < classes; ++c) shifted[c] = logits[i][c] + d[c];
    total += cross_entropy(shifted, labels[i]);
  }
  out.loss = batch.size() == 0 ? 0.0 : total / static_cast<double>(batch.size());

  if (base_offset != nullptr) {
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t j = 0; j < classes; ++j) out.class_offsets[c][j] += (*base_offset)[j];
    }
  }
  return out;
}

}  // namespace

LplResult lpl_loss_single(const LogitBatch& batch, const CategorySplit& split, const BoundVector& bounds,
                          double alpha) {
  if (batch.kind != TaskKind::single_label) throw std::invalid_argument("lpl_loss_single: single-label batch expected");
  batch.validate();
  return lpl_on_logits(batch, batch.logits, split, bounds, alpha, nullptr);
}

LplResult combined_la_lpl_loss(const LogitBatch& batch, const ClassProfile& profile, double lambda,
                               const CategorySplit& split, const BoundVector& bounds, double alpha) {
  if (batch.kind != TaskKind::single_label) {
    throw std::invalid_argument("combined_la_lpl_loss: single-label batch expected");
  }
  batch.validate();
  if (profile.num_classes() != batch.num_classes()) {
    throw std::invalid_argument("combined_la_lpl_loss: profile class count differs from batch");
  }
  const RealVec la = la_offset(profile, lambda);
  std::vector<RealVec> shifted = batch.logits;
  for (RealVec& u : shifted) {
    for (std::size_t c = 0; c < u.size(); ++c) u[c] += la[c];
  }
  return lpl_on_logits(batch, shifted, split, bounds, alpha, &la);
}

double multilabel_delta(std::size_t cls, double tau, double bound) {
  if (!(bound >= 0.0)) throw std::invalid_argument("multilabel_delta: bound must be >= 0");
  return static_cast<double>(cls + 1) - tau >= 0.0 ? bound : -bound;
}

RealVec multilabel_deltas(std::size_t num_classes, double tau, const BoundVector& bounds) {
  if (bounds.bounds.size() != num_classes) throw std::invalid_argument("multilabel_deltas: bound count mismatch");
  RealVec out(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) out[c] = multilabel_delta(c, tau, bounds.bounds[c]);
  return out;
}

std::vector<RealVec> multilabel_lpl_offsets(const LogitBatch& batch, double tau, const BoundVector& bounds) {
  if (batch.kind != TaskKind::multi_label) throw std::invalid_argument("lpl_loss_multilabel: multi-label batch expected");
  RealVec neg = multilabel_deltas(batch.num_classes(), tau, bounds);
  for (double& d : neg) d = -d;
  return std::vector<RealVec>(batch.size(), neg);
}

double lpl_loss_multilabel(const LogitBatch& batch, double tau, const BoundVector& bounds) {
  const RealVec delta = multilabel_deltas(batch.num_classes(), tau, bounds);
  batch.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t c = 0; c < batch.num_classes(); ++c) {
      const double u = batch.logits[i][c];
      total += batch.positive(i, c) ? softplus(-u + delta[c]) : softplus(u - delta[c]);
    }
  }
  const double n = static_cast<double>(batch.size() * batch.num_classes());
  return n == 0.0 ? 0.0 : total / n;
}

}  // namespace lpl

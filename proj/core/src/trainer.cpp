#include "lpl/trainer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "lpl/errors.hpp"

namespace lpl {
namespace {

using Index = Eigen::Index;

bool uses_lpl(Method m) { return m == Method::lpl || m == Method::la_lpl; }

std::vector<std::size_t> labels_of(const std::vector<RealVec>& targets) {
  std::vector<std::size_t> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) out[i] = one_hot_index(targets[i]);
  return out;
}

ConfidenceVec as_confidence(const RealVec& q) {
  ConfidenceVec out(q.size());
  for (std::size_t c = 0; c < q.size(); ++c) out[c] = q[c];
  return out;
}

void set_class_rows(Eigen::MatrixXd& offsets, const std::vector<std::size_t>& labels,
                    const std::vector<RealVec>& per_class) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const RealVec& o = per_class[labels[i]];
    for (std::size_t c = 0; c < o.size(); ++c) offsets(static_cast<Index>(i), static_cast<Index>(c)) = o[c];
  }
}

void set_all_rows(Eigen::MatrixXd& offsets, const RealVec& o) {
  for (Index i = 0; i < offsets.rows(); ++i) {
    for (std::size_t c = 0; c < o.size(); ++c) offsets(i, static_cast<Index>(c)) = o[c];
  }
}

const Eigen::MatrixXd& output_weights(const ModelParams& model) {
  return model.arch == Architecture::linear ? model.w1 : model.w2;
}

std::vector<Eigen::MatrixXd> covariances_of(const ModelParams& model, const Dataset& data) {
  const Eigen::MatrixXd feats = penultimate(model, data.features);
  const std::size_t classes = data.num_classes();
  const Index dim = feats.cols();
  std::vector<Eigen::MatrixXd> cov(classes, Eigen::MatrixXd::Zero(dim, dim));
  std::vector<Eigen::VectorXd> mean(classes, Eigen::VectorXd::Zero(dim));
  std::vector<double> count(classes, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t k = data.label(i);
    mean[k] += feats.row(static_cast<Index>(i)).transpose();
    count[k] += 1.0;
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (count[k] > 0.0) mean[k] /= count[k];
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t k = data.label(i);
    const Eigen::VectorXd diff = feats.row(static_cast<Index>(i)).transpose() - mean[k];
    cov[k] += diff * diff.transpose();
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (count[k] > 0.0) cov[k] /= count[k];
    cov[k] = 0.5 * (cov[k] + cov[k].transpose());
  }
  return cov;
}

void sgd_step(Eigen::Ref<Eigen::MatrixXd> param, Eigen::Ref<Eigen::MatrixXd> velocity, const Eigen::MatrixXd& grad,
              const TrainConfig& cfg) {
  if (param.size() == 0) return;
  Eigen::MatrixXd g = grad;
  if (cfg.weight_decay != 0.0) g += cfg.weight_decay * param;
  if (cfg.momentum != 0.0) {
    velocity = cfg.momentum * velocity + g;
    param -= cfg.learning_rate * velocity;
  } else {
    param -= cfg.learning_rate * g;
  }
}

std::vector<std::size_t> permutation(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  return idx;
}

void push_metrics(std::vector<HistoryRow>& h, std::size_t epoch, const std::string& split, const EvalMetrics& m) {
  h.push_back({epoch, split, std::nullopt, "top1_error", m.top1_error});
  for (std::size_t c = 0; c < m.class_error.size(); ++c) {
    if (m.class_error[c]) h.push_back({epoch, split, c, "class_error", *m.class_error[c]});
  }
  if (m.map) h.push_back({epoch, split, std::nullopt, "mAP", *m.map});
  for (std::size_t c = 0; c < m.ap.size(); ++c) {
    if (m.ap[c]) h.push_back({epoch, split, c, "ap", *m.ap[c]});
  }
}

}  // namespace

TauRule tau_rule_from_string(const std::string& name) {
  if (name == "fixed") return TauRule::fixed;
  if (name == "running_mean") return TauRule::running_mean;
  throw std::invalid_argument("tau rule must be fixed or running_mean, got '" + name + "'");
}

SplitMode split_mode_from_string(const std::string& name) {
  if (name == "balanced_performance") return SplitMode::balanced_performance;
  if (name == "longtail_index") return SplitMode::longtail_index;
  if (name == "multilabel") return SplitMode::multilabel;
  throw std::invalid_argument("unknown split mode '" + name + "'");
}

const char* split_mode_name(SplitMode m) {
  switch (m) {
    case SplitMode::balanced_performance: return "balanced_performance";
    case SplitMode::longtail_index: return "longtail_index";
    case SplitMode::multilabel: return "multilabel";
  }
  return "?";
}

void TrainConfig::validate(TaskKind kind, std::size_t num_classes) const {
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw std::invalid_argument("train: learning rate must be > 0");
  if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("train: momentum must lie in [0, 1)");
  if (weight_decay < 0.0) throw std::invalid_argument("train: weight decay must be >= 0");
  if (arch == Architecture::mlp && hidden < 1) throw std::invalid_argument("train: mlp needs hidden >= 1");
  if (!method_supports(method, kind)) {
    throw std::invalid_argument(std::string("train: method '") + method_name(method) + "' does not support " +
                                (kind == TaskKind::single_label ? "single-label" : "multi-label") + " data");
  }
  if (!(confidence_momentum >= 0.0 && confidence_momentum < 1.0)) {
    throw std::invalid_argument("train: confidence momentum must lie in [0, 1)");
  }
  if (uses_lpl(method)) {
    lpl.validate(num_classes);
    if (kind == TaskKind::multi_label && lpl.mode == SplitMode::balanced_performance) {
      throw std::invalid_argument("train: multi-label LPL needs an index threshold split");
    }
  }
  if (method == Method::ntr && !(ntr_lambda > 0.0)) throw std::invalid_argument("train: ntr lambda must be > 0");
  if (method == Method::lc && (lc.mean_pos.size() != num_classes || lc.mean_neg.size() != num_classes)) {
    throw std::invalid_argument("train: lc means need one value per class");
  }
}

BatchPerturbation compute_perturbation(const TrainConfig& cfg, const ClassProfile& profile, const ModelParams& model,
                                       const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets,
                                       TaskKind kind, LplState& state,
                                       const std::vector<Eigen::MatrixXd>* isda_covariances) {
  const auto n = static_cast<std::size_t>(logits.rows());
  const auto classes = static_cast<std::size_t>(logits.cols());
  BatchPerturbation out;
  out.offsets = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());

  switch (cfg.method) {
    case Method::none: break;
    case Method::la: set_all_rows(out.offsets, la_offset(profile, cfg.la_lambda)); break;
    case Method::isda: {
      if (isda_covariances == nullptr) throw std::invalid_argument("isda: class covariances required");
      IsdaInputs in{*isda_covariances, output_weights(model), cfg.isda_strength};
      std::vector<RealVec> per_class(classes);
      for (std::size_t k = 0; k < classes; ++k) per_class[k] = isda_offset(in, k);
      set_class_rows(out.offsets, labels_of(targets), per_class);
      break;
    }
    case Method::ldam: {
      const double margin = cfg.ldam_scale * default_ldam_margin(profile);
      std::vector<RealVec> per_class(classes);
      for (std::size_t k = 0; k < classes; ++k) per_class[k] = ldam_offset(profile, k, margin);
      set_class_rows(out.offsets, labels_of(targets), per_class);
      break;
    }
    case Method::ntr:
      out.ntr = true;
      out.ntr_shift = ntr_offset(profile, cfg.ntr_psi);
      break;
    case Method::lc:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < classes; ++c) {
          out.offsets(static_cast<Index>(i), static_cast<Index>(c)) =
              targets[i][c] == 1.0 ? cfg.lc.mean_pos[c] : cfg.lc.mean_neg[c];
        }
      }
      break;
    case Method::lpl:
    case Method::la_lpl: {
      if (state.q_bar.size() != classes) state.q_bar.assign(classes, 1.0 / static_cast<double>(classes));
      const std::vector<RealVec> rows = to_rows(logits);
      LogitBatch batch = kind == TaskKind::single_label
                             ? LogitBatch::single_label(rows, labels_of(targets))
                             : LogitBatch::multi_label(rows, targets);
      const ConfidenceVec conf =
          kind == TaskKind::single_label ? class_mean_confidence(batch) : class_mean_confidence_multilabel(batch);
      const double m = cfg.confidence_momentum;
      for (std::size_t c = 0; c < classes; ++c) {
        if (conf[c]) state.q_bar[c] = m * state.q_bar[c] + (1.0 - m) * *conf[c];
      }
      const SplitMode mode = cfg.lpl.mode;
      if (mode == SplitMode::balanced_performance && cfg.tau_rule == TauRule::running_mean) {
        state.tau = std::accumulate(state.q_bar.begin(), state.q_bar.end(), 0.0) / static_cast<double>(classes);
      } else {
        state.tau = cfg.lpl.tau;
      }
      const ConfidenceVec q = as_confidence(state.q_bar);
      const BoundVector bounds = compute_bounds(q, state.tau, cfg.lpl, default_bound_form(mode));

      if (kind == TaskKind::multi_label) {
        set_all_rows(out.offsets, multilabel_lpl_offsets(batch, state.tau, bounds).front());
        out.split = split_by_index(classes, state.tau).positive;
        break;
      }
      const CategorySplit split = mode == SplitMode::balanced_performance ? split_by_performance(q, state.tau)
                                                                          : split_by_index(classes, state.tau);
      const LplResult r = cfg.method == Method::lpl
                              ? lpl_loss_single(batch, split, bounds, cfg.lpl.alpha)
                              : combined_la_lpl_loss(batch, profile, cfg.la_lambda, split, bounds, cfg.lpl.alpha);
      set_class_rows(out.offsets, labels_of(targets), r.class_offsets);
      out.split = split.positive;
      break;
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> class_feature_covariances(const ModelParams& model, const Dataset& data) {
  return covariances_of(model, data);
}

LossGradient model_loss_gradient(const ModelParams& model, const Eigen::MatrixXd& x,
                                 const std::vector<RealVec>& targets, TaskKind kind,
                                 const BatchPerturbation& perturbation, double ntr_lambda) {
  const ForwardCache cache = forward(model, x);
  const LossEval e = perturbation.ntr ? ntr_offset_loss(cache.logits, targets, perturbation.ntr_shift, ntr_lambda)
                                      : offset_loss(kind, cache.logits, targets, perturbation.offsets);
  return {e.loss, backward(model, cache, x, e.dlogits)};
}

TrainResult train(const TrainConfig& cfg, const Dataset& train_set, const Dataset* test_set) {
  train_set.validate();
  const TaskKind kind = train_set.kind;
  const std::size_t classes = train_set.num_classes();
  cfg.validate(kind, classes);
  if (test_set != nullptr) {
    test_set->validate();
    if (test_set->kind != kind || test_set->num_classes() != classes || test_set->dim() != train_set.dim()) {
      throw std::invalid_argument("train: test set shape differs from training set");
    }
  }

  RngStream init_rng(cfg.seed, 0);
  RngStream order_rng(cfg.seed, 1);
  TrainResult result;
  result.model = ModelParams::init(cfg.arch, train_set.dim(), cfg.hidden, classes, init_rng);
  ModelParams velocity = result.model.zeros_like();
  LplState& state = result.lpl_state;
  state.q_bar.assign(classes, 1.0 / static_cast<double>(classes));
  state.tau = cfg.lpl.tau;
  const ClassProfile& profile = train_set.profile;
  const std::size_t n = train_set.size();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<Eigen::MatrixXd> cov;
    if (cfg.method == Method::isda) cov = covariances_of(result.model, train_set);

    const std::vector<std::size_t> order = permutation(n, order_rng);
    std::vector<RealVec> epoch_logits, epoch_targets;
    LossTable base_table, pert_table;
    double loss_sum = 0.0;
    std::size_t batches = 0;

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const auto rows = static_cast<Index>(end - start);
      Eigen::MatrixXd xb(rows, static_cast<Index>(train_set.dim()));
      std::vector<RealVec> tb(end - start);
      for (std::size_t r = start; r < end; ++r) {
        xb.row(static_cast<Index>(r - start)) = train_set.features.row(static_cast<Index>(order[r]));
        tb[r - start] = train_set.targets[order[r]];
      }

      const ForwardCache cache = forward(result.model, xb);
      if (!cache.logits.allFinite()) {
        throw DivergenceError(fmt::format("training diverged: non-finite logits at epoch {}, batch {}", epoch, batches + 1));
      }
      const BatchPerturbation pert = compute_perturbation(cfg, profile, result.model, cache.logits, tb, kind,
                                                          state, cfg.method == Method::isda ? &cov : nullptr);
      const LossEval e = pert.ntr ? ntr_offset_loss(cache.logits, tb, pert.ntr_shift, cfg.ntr_lambda)
                                  : offset_loss(kind, cache.logits, tb, pert.offsets);
      if (!std::isfinite(e.loss)) {
        throw DivergenceError(fmt::format("training diverged: non-finite loss at epoch {}, batch {}", epoch, batches + 1));
      }
      loss_sum += e.loss;
      ++batches;

      const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(cache.logits.rows(), cache.logits.cols());
      LossTable base = offset_loss_table(kind, cache.logits, tb, zero);
      LossTable perturbed = pert.ntr ? ntr_loss_table(cache.logits, tb, pert.ntr_shift, cfg.ntr_lambda)
                                     : offset_loss_table(kind, cache.logits, tb, pert.offsets);
      for (std::size_t r = 0; r < tb.size(); ++r) {
        epoch_logits.push_back(RealVec(static_cast<std::size_t>(cache.logits.cols()), 0.0));
        epoch_targets.push_back(tb[r]);
        base_table.push_back(std::move(base[r]));
        pert_table.push_back(std::move(perturbed[r]));
      }

      const ModelParams g = backward(result.model, cache, xb, e.dlogits);
      sgd_step(result.model.w1, velocity.w1, g.w1, cfg);
      sgd_step(result.model.b1, velocity.b1, g.b1, cfg);
      sgd_step(result.model.w2, velocity.w2, g.w2, cfg);
      sgd_step(result.model.b2, velocity.b2, g.b2, cfg);
      if (!result.model.all_finite()) {
        throw DivergenceError(fmt::format("training diverged: non-finite parameter at epoch {}", epoch));
      }
    }

    const LogitBatch epoch_batch = kind == TaskKind::single_label
                                       ? LogitBatch::single_label(epoch_logits, labels_of(epoch_targets))
                                       : LogitBatch::multi_label(epoch_logits, epoch_targets);
    VariationRecord rec{epoch, relative_loss_variation(epoch_batch, base_table, pert_table)};

    auto& h = result.history;
    h.push_back({epoch, "train", std::nullopt, "loss", loss_sum / static_cast<double>(batches)});
    if (uses_lpl(cfg.method)) h.push_back({epoch, "train", std::nullopt, "tau", state.tau});
    for (std::size_t c = 0; c < classes; ++c) {
      const ClassVariation& v = rec.classes[c];
      if (v.all) h.push_back({epoch, "train", c, "loss_variation", *v.all});
      if (v.positive) h.push_back({epoch, "train", c, "loss_variation_pos", *v.positive});
      if (v.negative) h.push_back({epoch, "train", c, "loss_variation_neg", *v.negative});
      if (uses_lpl(cfg.method)) h.push_back({epoch, "train", c, "q_bar", state.q_bar[c]});
    }
    result.final_train = evaluate(result.model, train_set);
    push_metrics(h, epoch, "train", result.final_train);
    if (test_set != nullptr) {
      result.final_test = evaluate(result.model, *test_set);
      push_metrics(h, epoch, "test", *result.final_test);
    }
    result.variation.push_back(std::move(rec));
  }
  return result;
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history) {
  os << "epoch,split,class,metric,value\n";
  for (const HistoryRow& r : history) {
    os << fmt::format("{},{},{},{},{:.12g}\n", r.epoch, r.split, r.cls ? std::to_string(*r.cls) : std::string("all"),
                      r.metric, r.value);
  }
}

}  // namespace lpl

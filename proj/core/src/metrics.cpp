#include "lpl/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lpl {

std::optional<double> average_precision(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw std::invalid_argument("average_precision: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (!positive[order[r]]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  if (hits == 0) return std::nullopt;
  return sum / static_cast<double>(hits);
}

EvalMetrics evaluate_logits(TaskKind kind, const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets) {
  const auto n = static_cast<std::size_t>(logits.rows());
  const auto classes = static_cast<std::size_t>(logits.cols());
  if (targets.size() != n) throw std::invalid_argument("evaluate: logits and targets differ in row count");
  EvalMetrics m;
  m.kind = kind;
  m.class_error.assign(classes, std::nullopt);
  if (n == 0) return m;

  std::size_t wrong = 0;
  std::vector<std::size_t> class_wrong(classes, 0), class_total(classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index top = 0;
    logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&top);
    const auto pred = static_cast<std::size_t>(top);
    if (kind == TaskKind::single_label) {
      const std::size_t k = one_hot_index(targets[i]);
      ++class_total[k];
      if (pred != k) {
        ++wrong;
        ++class_wrong[k];
      }
    } else {
      wrong += targets[i][pred] != 1.0;
      for (std::size_t c = 0; c < classes; ++c) {
        ++class_total[c];
        const bool predicted = logits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) > 0.0;
        class_wrong[c] += predicted != (targets[i][c] == 1.0);
      }
    }
  }
  m.top1_error = static_cast<double>(wrong) / static_cast<double>(n);
  for (std::size_t c = 0; c < classes; ++c) {
    if (class_total[c] > 0) m.class_error[c] = static_cast<double>(class_wrong[c]) / static_cast<double>(class_total[c]);
  }

  if (kind == TaskKind::multi_label) {
    m.ap.assign(classes, std::nullopt);
    double sum = 0.0;
    std::size_t counted = 0;
    std::vector<double> scores(n);
    std::vector<bool> pos(n);
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        scores[i] = logits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        pos[i] = targets[i][c] == 1.0;
      }
      m.ap[c] = average_precision(scores, pos);
      if (m.ap[c]) {
        sum += *m.ap[c];
        ++counted;
      }
    }
    if (counted > 0) m.map = sum / static_cast<double>(counted);
  }
  return m;
}

EvalMetrics evaluate(const ModelParams& model, const Dataset& data) {
  return evaluate_logits(data.kind, predict_logits(model, data.features), data.targets);
}

}  // namespace lpl

#include "lpl/math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lpl {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite element");
    }
  }
}

ProbVec softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logit vector");
  require_finite(logits, "softmax");
  const double m = *std::max_element(logits.begin(), logits.end());
  ProbVec out(logits.size());
  double z = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    out[c] = std::exp(logits[c] - m);
    z += out[c];
  }
  for (double& p : out) p /= z;
  return out;
}

std::size_t one_hot_index(std::span<const double> target) {
  std::size_t hot = target.size();
  for (std::size_t c = 0; c < target.size(); ++c) {
    if (target[c] == 1.0) {
      if (hot != target.size()) throw std::invalid_argument("target has more than one hot entry");
      hot = c;
    } else if (target[c] != 0.0) {
      throw std::invalid_argument("target entries must be 0 or 1");
    }
  }
  if (hot == target.size()) throw std::invalid_argument("target has no hot entry");
  return hot;
}

double cross_entropy(std::span<const double> logits, std::size_t label) {
  if (logits.empty()) throw std::invalid_argument("cross_entropy: empty logit vector");
  if (label >= logits.size()) throw std::invalid_argument("cross_entropy: label out of range");
  require_finite(logits, "cross_entropy");
  // log-sum-exp around the max keeps this exact for large logits
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double u : logits) z += std::exp(u - m);
  return std::log(z) + m - logits[label];
}

double cross_entropy(std::span<const double> logits, std::span<const double> target) {
  if (target.size() != logits.size()) {
    throw std::invalid_argument("cross_entropy: target length differs from logits");
  }
  return cross_entropy(logits, one_hot_index(target));
}

RealVec ce_logit_gradient(std::span<const double> logits, std::size_t label) {
  if (label >= logits.size()) throw std::invalid_argument("ce_logit_gradient: label out of range");
  RealVec g = softmax(logits);
  g[label] -= 1.0;
  return g;
}

RealVec ce_logit_gradient(std::span<const double> logits, std::span<const double> target) {
  if (target.size() != logits.size()) {
    throw std::invalid_argument("ce_logit_gradient: target length differs from logits");
  }
  return ce_logit_gradient(logits, one_hot_index(target));
}

double softplus(double x) {
  if (x >= 30.0) return x + std::exp(-x);
  if (x <= -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double binary_logistic_loss(double logit, bool positive) {
  if (!std::isfinite(logit)) throw std::invalid_argument("binary_logistic_loss: non-finite logit");
  return positive ? softplus(-logit) : softplus(logit);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace lpl

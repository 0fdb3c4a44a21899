#pragma once

#include <span>
#include <vector>

namespace lpl {

/// Dense logit / offset vector. Elements are finite after every exported op.
using RealVec = std::vector<double>;
/// Output of softmax: non-negative, sums to one.
using ProbVec = std::vector<double>;

/// Throws std::invalid_argument if any element is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

/// Max-subtracted softmax. Throws on empty input.
ProbVec softmax(std::span<const double> logits);

/// Index k of a one-hot target; throws if `target` is not one-hot.
std::size_t one_hot_index(std::span<const double> target);

/// -log softmax(u)_k for the one-hot target k.
double cross_entropy(std::span<const double> logits, std::span<const double> target);
double cross_entropy(std::span<const double> logits, std::size_t label);

/// softmax(u) - y.
RealVec ce_logit_gradient(std::span<const double> logits, std::span<const double> target);
RealVec ce_logit_gradient(std::span<const double> logits, std::size_t label);

/// log(1 + e^x), overflow-safe.
double softplus(double x);
double sigmoid(double x);

/// y = 1: log(1 + e^{-u});  y = 0: log(1 + e^{u}).
double binary_logistic_loss(double logit, bool positive);

/// Standard normal CDF via erfc; absolute error well below 1e-15.
double std_normal_cdf(double x);

}  // namespace lpl

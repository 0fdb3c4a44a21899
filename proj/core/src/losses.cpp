#include "lpl/losses.hpp"

#include <stdexcept>

namespace lpl {
namespace {

using Index = Eigen::Index;

void check_shapes(const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets, const Eigen::MatrixXd& offsets) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size()) {
    throw std::invalid_argument("loss: logits and targets differ in row count");
  }
  if (offsets.rows() != logits.rows() || offsets.cols() != logits.cols()) {
    throw std::invalid_argument("loss: offsets must match the logit shape");
  }
  for (const RealVec& t : targets) {
    if (static_cast<Index>(t.size()) != logits.cols()) throw std::invalid_argument("loss: target width mismatch");
  }
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "none") return Method::none;
  if (name == "la") return Method::la;
  if (name == "isda") return Method::isda;
  if (name == "ldam") return Method::ldam;
  if (name == "ntr") return Method::ntr;
  if (name == "lc") return Method::lc;
  if (name == "lpl") return Method::lpl;
  if (name == "la_lpl") return Method::la_lpl;
  throw std::invalid_argument("unknown method '" + name + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::none: return "none";
    case Method::la: return "la";
    case Method::isda: return "isda";
    case Method::ldam: return "ldam";
    case Method::ntr: return "ntr";
    case Method::lc: return "lc";
    case Method::lpl: return "lpl";
    case Method::la_lpl: return "la_lpl";
  }
  return "?";
}

bool method_supports(Method m, TaskKind kind) {
  switch (m) {
    case Method::isda:
    case Method::ldam:
    case Method::la_lpl: return kind == TaskKind::single_label;
    case Method::ntr:
    case Method::lc: return kind == TaskKind::multi_label;
    default: return true;
  }
}

LossEval offset_loss(TaskKind kind, const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets,
                     const Eigen::MatrixXd& offsets) {
  check_shapes(logits, targets, offsets);
  const Index n = logits.rows();
  const Index c = logits.cols();
  LossEval out;
  out.dlogits.resize(n, c);
  if (n == 0) return out;
  double total = 0.0;
  RealVec u(static_cast<std::size_t>(c));
  if (kind == TaskKind::single_label) {
    const double inv = 1.0 / static_cast<double>(n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < c; ++j) u[static_cast<std::size_t>(j)] = logits(i, j) + offsets(i, j);
      const std::size_t k = one_hot_index(targets[static_cast<std::size_t>(i)]);
      total += cross_entropy(u, k);
      const RealVec g = ce_logit_gradient(u, k);
      for (Index j = 0; j < c; ++j) out.dlogits(i, j) = inv * g[static_cast<std::size_t>(j)];
    }
    out.loss = total * inv;
  } else {
    const double inv = 1.0 / static_cast<double>(n * c);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < c; ++j) {
        const double z = logits(i, j) + offsets(i, j);
        const bool pos = targets[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 1.0;
        total += binary_logistic_loss(z, pos);
        out.dlogits(i, j) = inv * (sigmoid(z) - (pos ? 1.0 : 0.0));
      }
    }
    out.loss = total * inv;
  }
  return out;
}

LossEval ntr_offset_loss(const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets, const RealVec& shift,
                         double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ntr_loss: lambda must be positive");
  const Index n = logits.rows();
  const Index c = logits.cols();
  if (static_cast<Index>(shift.size()) != c) throw std::invalid_argument("ntr_loss: shift length mismatch");
  check_shapes(logits, targets, Eigen::MatrixXd::Zero(n, c));
  LossEval out;
  out.dlogits.resize(n, c);
  if (n == 0) return out;
  const double inv = 1.0 / static_cast<double>(n * c);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < c; ++j) {
      const double z = logits(i, j) + shift[static_cast<std::size_t>(j)];
      if (targets[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 1.0) {
        total += softplus(-z);
        out.dlogits(i, j) = -inv * sigmoid(-z);
      } else {
        total += softplus(lambda * z) / lambda;
        out.dlogits(i, j) = inv * sigmoid(lambda * z);
      }
    }
  }
  out.loss = total * inv;
  return out;
}

std::vector<RealVec> offset_loss_table(TaskKind kind, const Eigen::MatrixXd& logits,
                                       const std::vector<RealVec>& targets, const Eigen::MatrixXd& offsets) {
  check_shapes(logits, targets, offsets);
  const Index n = logits.rows();
  const Index c = logits.cols();
  std::vector<RealVec> out(static_cast<std::size_t>(n));
  RealVec u(static_cast<std::size_t>(c));
  for (Index i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    if (kind == TaskKind::single_label) {
      for (Index j = 0; j < c; ++j) u[static_cast<std::size_t>(j)] = logits(i, j) + offsets(i, j);
      out[r] = {cross_entropy(u, one_hot_index(targets[r]))};
    } else {
      out[r].resize(static_cast<std::size_t>(c));
      for (Index j = 0; j < c; ++j) {
        const auto k = static_cast<std::size_t>(j);
        out[r][k] = binary_logistic_loss(logits(i, j) + offsets(i, j), targets[r][k] == 1.0);
      }
    }
  }
  return out;
}

std::vector<RealVec> ntr_loss_table(const Eigen::MatrixXd& logits, const std::vector<RealVec>& targets,
                                    const RealVec& shift, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ntr_loss: lambda must be positive");
  std::vector<RealVec> out(targets.size(), RealVec(static_cast<std::size_t>(logits.cols())));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = 0; j < out[i].size(); ++j) {
      const double z = logits(static_cast<Index>(i), static_cast<Index>(j)) + shift[j];
      out[i][j] = targets[i][j] == 1.0 ? softplus(-z) : softplus(lambda * z) / lambda;
    }
  }
  return out;
}

Eigen::MatrixXd to_matrix(const std::vector<RealVec>& rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("to_matrix: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

std::vector<RealVec> to_rows(const Eigen::MatrixXd& m) {
  std::vector<RealVec> out(static_cast<std::size_t>(m.rows()), RealVec(static_cast<std::size_t>(m.cols())));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return out;
}

}  // namespace lpl

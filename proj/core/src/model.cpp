#include "lpl/model.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "lpl/errors.hpp"

namespace lpl {
namespace {

using Index = Eigen::Index;

void fill_normal(Eigen::MatrixXd& m, double sd, RngStream& rng) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal(0.0, sd);
  }
}

void write_tensor(std::ostream& os, const char* name, const Eigen::MatrixXd& m) {
  os << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    std::string line;
    for (Index j = 0; j < m.cols(); ++j) line += fmt::format("{}{}", j == 0 ? "" : " ", m(i, j));
    os << line << '\n';
  }
}

Eigen::MatrixXd read_tensor(std::istream& is, const std::string& expected) {
  std::string name;
  Index rows = 0, cols = 0;
  if (!(is >> name >> rows >> cols) || name != expected || rows < 0 || cols < 0) {
    throw ParseError("model dump: expected tensor '" + expected + "'", 0);
  }
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(is >> m(i, j))) throw ParseError("model dump: truncated tensor '" + expected + "'", 0);
    }
  }
  return m;
}

}  // namespace

Architecture architecture_from_string(const std::string& name) {
  if (name == "linear") return Architecture::linear;
  if (name == "mlp") return Architecture::mlp;
  throw std::invalid_argument("architecture must be linear or mlp, got '" + name + "'");
}

const char* architecture_name(Architecture a) { return a == Architecture::linear ? "linear" : "mlp"; }

ModelParams ModelParams::init(Architecture arch, std::size_t input_dim, std::size_t hidden, std::size_t classes,
                              RngStream& rng) {
  if (input_dim == 0 || classes == 0) throw std::invalid_argument("model: dimensions must be positive");
  if (arch == Architecture::mlp && hidden == 0) throw std::invalid_argument("model: mlp needs a hidden width");
  ModelParams m;
  m.arch = arch;
  m.input_dim = input_dim;
  m.classes = classes;
  const auto d = static_cast<Index>(input_dim);
  const auto c = static_cast<Index>(classes);
  if (arch == Architecture::linear) {
    m.w1.resize(c, d);
    fill_normal(m.w1, 0.01, rng);
    m.b1 = Eigen::VectorXd::Zero(c);
  } else {
    m.hidden = hidden;
    const auto h = static_cast<Index>(hidden);
    m.w1.resize(h, d);
    fill_normal(m.w1, std::sqrt(2.0 / static_cast<double>(input_dim)), rng);
    m.b1 = Eigen::VectorXd::Zero(h);
    m.w2.resize(c, h);
    fill_normal(m.w2, std::sqrt(1.0 / static_cast<double>(hidden)), rng);
    m.b2 = Eigen::VectorXd::Zero(c);
  }
  return m;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  z.w1.setZero();
  z.b1.setZero();
  z.w2.setZero();
  z.b2.setZero();
  return z;
}

std::size_t ModelParams::num_params() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

Eigen::VectorXd ModelParams::flatten() const {
  Eigen::VectorXd flat(static_cast<Index>(num_params()));
  Index k = 0;
  flat.segment(k, w1.size()) = Eigen::Map<const Eigen::VectorXd>(w1.data(), w1.size());
  k += w1.size();
  flat.segment(k, b1.size()) = b1;
  k += b1.size();
  flat.segment(k, w2.size()) = Eigen::Map<const Eigen::VectorXd>(w2.data(), w2.size());
  k += w2.size();
  flat.segment(k, b2.size()) = b2;
  return flat;
}

void ModelParams::unflatten(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != num_params()) throw std::invalid_argument("model: flat size mismatch");
  Index k = 0;
  Eigen::Map<Eigen::VectorXd>(w1.data(), w1.size()) = flat.segment(k, w1.size());
  k += w1.size();
  b1 = flat.segment(k, b1.size());
  k += b1.size();
  Eigen::Map<Eigen::VectorXd>(w2.data(), w2.size()) = flat.segment(k, w2.size());
  k += w2.size();
  b2 = flat.segment(k, b2.size());
}

bool ModelParams::all_finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

void ModelParams::validate() const {
  const auto d = static_cast<Index>(input_dim);
  const auto c = static_cast<Index>(classes);
  bool ok;
  if (arch == Architecture::linear) {
    ok = w1.rows() == c && w1.cols() == d && b1.size() == c && w2.size() == 0 && b2.size() == 0;
  } else {
    const auto h = static_cast<Index>(hidden);
    ok = w1.rows() == h && w1.cols() == d && b1.size() == h && w2.rows() == c && w2.cols() == h && b2.size() == c;
  }
  if (!ok) throw std::invalid_argument("model: parameter shapes inconsistent with (d, hidden, C)");
  if (!all_finite()) throw DivergenceError("model: non-finite parameter");
}

ForwardCache forward(const ModelParams& model, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.cols()) != model.input_dim) {
    throw std::invalid_argument("forward: feature dimension differs from model input");
  }
  ForwardCache cache;
  if (model.arch == Architecture::linear) {
    cache.logits = (x * model.w1.transpose()).rowwise() + model.b1.transpose();
  } else {
    cache.pre = (x * model.w1.transpose()).rowwise() + model.b1.transpose();
    cache.hidden = cache.pre.cwiseMax(0.0);
    cache.logits = (cache.hidden * model.w2.transpose()).rowwise() + model.b2.transpose();
  }
  return cache;
}

Eigen::MatrixXd predict_logits(const ModelParams& model, const Eigen::MatrixXd& x) {
  return forward(model, x).logits;
}

Eigen::MatrixXd penultimate(const ModelParams& model, const Eigen::MatrixXd& x) {
  if (model.arch == Architecture::linear) return x;
  return forward(model, x).hidden;
}

ModelParams backward(const ModelParams& model, const ForwardCache& cache, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& dlogits) {
  ModelParams g = model.zeros_like();
  if (model.arch == Architecture::linear) {
    g.w1 = dlogits.transpose() * x;
    g.b1 = dlogits.colwise().sum().transpose();
    return g;
  }
  g.w2 = dlogits.transpose() * cache.hidden;
  g.b2 = dlogits.colwise().sum().transpose();
  const Eigen::MatrixXd dh = (dlogits * model.w2).cwiseProduct((cache.pre.array() > 0.0).cast<double>().matrix());
  g.w1 = dh.transpose() * x;
  g.b1 = dh.colwise().sum().transpose();
  return g;
}

void save_model(std::ostream& os, const ModelParams& model) {
  os << "lpl-model 1\n"
     << "arch " << architecture_name(model.arch) << '\n'
     << "dims " << model.input_dim << ' ' << model.hidden << ' ' << model.classes << '\n';
  write_tensor(os, "w1", model.w1);
  write_tensor(os, "b1", model.b1);
  write_tensor(os, "w2", model.w2);
  write_tensor(os, "b2", model.b2);
}

ModelParams load_model(std::istream& is) {
  std::string magic, key, arch;
  int version = 0;
  if (!(is >> magic >> version) || magic != "lpl-model" || version != 1) {
    throw ParseError("model dump: bad header", 1);
  }
  if (!(is >> key >> arch) || key != "arch") throw ParseError("model dump: missing arch", 2);
  ModelParams m;
  m.arch = architecture_from_string(arch);
  if (!(is >> key >> m.input_dim >> m.hidden >> m.classes) || key != "dims") {
    throw ParseError("model dump: missing dims", 3);
  }
  m.w1 = read_tensor(is, "w1");
  m.b1 = read_tensor(is, "b1");
  m.w2 = read_tensor(is, "w2");
  m.b2 = read_tensor(is, "b2");
  m.validate();
  return m;
}

}  // namespace lpl

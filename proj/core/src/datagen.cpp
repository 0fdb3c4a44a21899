#include "lpl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lpl {
namespace {

constexpr std::uint64_t kPrototypeStream = 0x70726f746fULL;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

RealVec one_hot(std::size_t c, std::size_t classes) {
  RealVec v(classes, 0.0);
  v[c] = 1.0;
  return v;
}

Eigen::MatrixXd class_means(std::size_t classes, std::size_t d, double separation) {
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(d));
  const auto C = static_cast<Eigen::Index>(classes);
  if (d >= classes) {
    // Scaled standard basis: |e_a - e_b| = sqrt(2).
    for (Eigen::Index c = 0; c < C; ++c) mu(c, c) = separation / std::sqrt(2.0);
  } else if (d >= 2) {
    const double pi = std::acos(-1.0);
    const double radius = separation / (2.0 * std::sin(pi / static_cast<double>(classes)));
    for (Eigen::Index c = 0; c < C; ++c) {
      const double a = 2.0 * pi * static_cast<double>(c) / static_cast<double>(classes);
      mu(c, 0) = radius * std::cos(a);
      mu(c, 1) = radius * std::sin(a);
    }
  } else {
    for (Eigen::Index c = 0; c < C; ++c) mu(c, 0) = separation * static_cast<double>(c);
  }
  return mu;
}

}  // namespace

std::size_t Dataset::label(std::size_t i) const {
  if (kind != TaskKind::single_label) throw std::invalid_argument("Dataset::label: single-label dataset expected");
  return one_hot_index(targets.at(i));
}

void Dataset::refresh_profile() {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (const RealVec& t : targets) {
    for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += t[c] == 1.0;
  }
  profile = ClassProfile::from_counts(std::move(counts), kind, size());
}

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != targets.size()) {
    throw std::invalid_argument("Dataset: feature and target row counts differ");
  }
  if (targets.empty()) throw std::invalid_argument("Dataset: empty");
  if (!features.allFinite()) throw std::invalid_argument("Dataset: non-finite feature");
  const std::size_t classes = targets.front().size();
  std::vector<std::size_t> counts(classes, 0);
  for (const RealVec& t : targets) {
    if (t.size() != classes) throw std::invalid_argument("Dataset: ragged targets");
    for (std::size_t c = 0; c < classes; ++c) {
      if (t[c] != 0.0 && t[c] != 1.0) throw std::invalid_argument("Dataset: targets must be 0/1");
      counts[c] += t[c] == 1.0;
    }
    if (kind == TaskKind::single_label) one_hot_index(t);
  }
  if (counts != profile.counts || profile.total != size()) {
    throw std::invalid_argument("Dataset: profile does not match label tallies");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.kind = kind;
  out.provenance = provenance;
  out.features.resize(static_cast<Eigen::Index>(idx.size()), features.cols());
  out.targets.reserve(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(idx[r]));
    out.targets.push_back(targets.at(idx[r]));
  }
  out.refresh_profile();
  return out;
}

Dataset gen_gaussian_binary(const TheoryParams& p, std::size_t n_plus, RngStream& rng) {
  p.validate();
  if (n_plus < 1) throw std::invalid_argument("gen_gaussian_binary: n_plus must be >= 1");
  const auto n_minus = static_cast<std::size_t>(std::ceil(p.gamma * static_cast<double>(n_plus) - 1e-9));
  const std::size_t n = n_minus + n_plus;

  Dataset ds;
  ds.kind = TaskKind::single_label;
  ds.features.resize(static_cast<Eigen::Index>(n), p.d);
  ds.targets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool plus = i >= n_minus;
    const double mean = plus ? p.eta : -p.eta;
    const double sd = plus ? p.sigma : p.k * p.sigma;
    for (int j = 0; j < p.d; ++j) ds.features(static_cast<Eigen::Index>(i), j) = rng.normal(mean, sd);
    ds.targets.push_back(one_hot(plus ? 1 : 0, 2));
  }
  ds.refresh_profile();
  ds.provenance = {"gaussian_binary",
                   {{"d", std::to_string(p.d)},
                    {"eta", num(p.eta)},
                    {"sigma", num(p.sigma)},
                    {"gamma", num(p.gamma)},
                    {"k", num(p.k)},
                    {"n_plus", std::to_string(n_plus)}},
                   rng.seed(),
                   rng.stream_id()};
  return ds;
}

Dataset gen_longtail_multiclass(std::size_t num_classes, double imbalance_ratio, std::size_t n_head, std::size_t d,
                                double separation, RngStream& rng) {
  if (num_classes < 2) throw std::invalid_argument("gen_longtail_multiclass: C must be >= 2");
  if (!(imbalance_ratio >= 1.0) || !std::isfinite(imbalance_ratio)) {
    throw std::invalid_argument("gen_longtail_multiclass: imbalance ratio must be >= 1");
  }
  if (d < 1) throw std::invalid_argument("gen_longtail_multiclass: d must be >= 1");
  if (!(separation > 0.0)) throw std::invalid_argument("gen_longtail_multiclass: separation must be > 0");

  std::vector<std::size_t> counts(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double e = -static_cast<double>(c) / static_cast<double>(num_classes - 1);
    counts[c] = static_cast<std::size_t>(std::llround(static_cast<double>(n_head) * std::pow(imbalance_ratio, e)));
  }
  if (counts.back() < 1) throw std::invalid_argument("gen_longtail_multiclass: tail class would be empty");

  const Eigen::MatrixXd mu = class_means(num_classes, d, separation);
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  Dataset ds;
  ds.kind = TaskKind::single_label;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  ds.targets.reserve(n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i, ++row) {
      for (std::size_t j = 0; j < d; ++j) {
        ds.features(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
            rng.normal(mu(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)), 1.0);
      }
      ds.targets.push_back(one_hot(c, num_classes));
    }
  }
  ds.refresh_profile();
  ds.provenance = {"longtail_multiclass",
                   {{"classes", std::to_string(num_classes)},
                    {"imbalance_ratio", num(imbalance_ratio)},
                    {"n_head", std::to_string(n_head)},
                    {"d", std::to_string(d)},
                    {"separation", num(separation)}},
                   rng.seed(),
                   rng.stream_id()};
  return ds;
}

std::vector<double> multilabel_frequencies(std::size_t num_classes, double head_frac, double label_density) {
  if (num_classes < 1) throw std::invalid_argument("gen_multilabel: C must be >= 1");
  if (!(label_density > 0.0 && label_density < 1.0)) {
    throw std::invalid_argument("gen_multilabel: label density must lie in (0, 1)");
  }
  if (!(head_frac > 0.0 && head_frac <= 1.0)) throw std::invalid_argument("gen_multilabel: head_frac must lie in (0, 1]");
  const auto C = static_cast<double>(num_classes);
  const double target = label_density * C;
  // sum_{c<C} head_frac r^c ranges over [head_frac, head_frac * C] for r in (0, 1].
  if (target < head_frac - 1e-12 || target > head_frac * C + 1e-12) {
    throw std::invalid_argument("gen_multilabel: density infeasible for the given head fraction");
  }
  auto total = [&](double r) {
    double s = 0.0, t = head_frac;
    for (std::size_t c = 0; c < num_classes; ++c, t *= r) s += t;
    return s;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < target ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  std::vector<double> p(num_classes);
  double t = head_frac;
  for (std::size_t c = 0; c < num_classes; ++c, t *= r) p[c] = t;
  return p;
}

Dataset gen_multilabel(std::size_t num_classes, std::size_t n, double head_frac, double label_density,
                       RngStream& rng, std::size_t d, double prototype_scale) {
  const std::vector<double> freq = multilabel_frequencies(num_classes, head_frac, label_density);
  if (n < 1) throw std::invalid_argument("gen_multilabel: n must be >= 1");
  if (d == 0) d = num_classes;

  std::vector<RealVec> targets(n, RealVec(num_classes, 0.0));
  std::vector<std::size_t> order(n);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto count = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(freq[c] * static_cast<double>(n))), 1, n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(order[i], order[i + rng.index(n - i)]);
      targets[order[i]][c] = 1.0;
    }
  }

  // Give label-free samples a label taken from a sample holding several;
  // moving a label keeps every class count intact.
  auto positives = [&](std::size_t i) {
    return static_cast<std::size_t>(std::count(targets[i].begin(), targets[i].end(), 1.0));
  };
  std::size_t donor = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positives(i) > 0) continue;
    while (donor < n && positives(donor) < 2) ++donor;
    if (donor == n) {
      targets[i][0] = 1.0;
      continue;
    }
    std::size_t c = num_classes;
    while (targets[donor][--c] != 1.0) {
    }
    targets[donor][c] = 0.0;
    targets[i][c] = 1.0;
  }

  // Prototypes depend on the seed only, so train and test draws made with
  // different streams of one seed share them.
  RngStream proto_rng(rng.seed(), kPrototypeStream);
  Eigen::MatrixXd protos(static_cast<Eigen::Index>(num_classes), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < protos.rows(); ++c) {
    for (Eigen::Index j = 0; j < protos.cols(); ++j) protos(c, j) = prototype_scale * proto_rng.normal();
  }
  Dataset ds;
  ds.kind = TaskKind::multi_label;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::RowVectorXd x(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = rng.normal();
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (targets[i][c] == 1.0) x += protos.row(static_cast<Eigen::Index>(c));
    }
    ds.features.row(static_cast<Eigen::Index>(i)) = x;
  }
  ds.targets = std::move(targets);
  ds.refresh_profile();
  ds.provenance = {"multilabel",
                   {{"classes", std::to_string(num_classes)},
                    {"n", std::to_string(n)},
                    {"head_frac", num(head_frac)},
                    {"label_density", num(label_density)},
                    {"d", std::to_string(d)},
                    {"prototype_scale", num(prototype_scale)}},
                   rng.seed(),
                   rng.stream_id()};
  return ds;
}

}  // namespace lpl

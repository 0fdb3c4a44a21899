#include "lpl/conjecture.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lpl {
namespace {

void require_same_training(const TrainConfig& a, const TrainConfig& b) {
  const bool same = a.arch == b.arch && a.hidden == b.hidden && a.epochs == b.epochs && a.batch_size == b.batch_size &&
                    a.learning_rate == b.learning_rate && a.momentum == b.momentum &&
                    a.weight_decay == b.weight_decay;
  if (!same) throw std::invalid_argument("conjecture_report: configs may differ only in their perturbation");
}

double class_mean_variation(const TrainResult& r, std::size_t c) {
  double s = 0.0;
  std::size_t n = 0;
  for (const VariationRecord& rec : r.variation) {
    if (c < rec.classes.size() && rec.classes[c].all) {
      s += *rec.classes[c].all;
      ++n;
    }
  }
  return n == 0 ? 0.0 : s / static_cast<double>(n);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::agree: return "agree";
    case Verdict::neutral: return "neutral";
    case Verdict::disagree: return "disagree";
  }
  return "?";
}

std::size_t ClassConjecture::agree_count() const {
  return static_cast<std::size_t>(std::count(verdicts.begin(), verdicts.end(), Verdict::agree));
}

std::size_t ClassConjecture::neutral_count() const {
  return static_cast<std::size_t>(std::count(verdicts.begin(), verdicts.end(), Verdict::neutral));
}

double ClassConjecture::mean(const std::vector<double>& v) const {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

ConjectureReport conjecture_report(const TrainConfig& baseline, const TrainConfig& perturbed,
                                   const DatasetProvider& provider, const std::vector<std::uint64_t>& seeds,
                                   double neutral_tol) {
  require_same_training(baseline, perturbed);
  ConjectureReport report;
  report.seeds = seeds;
  for (std::uint64_t seed : seeds) {
    const auto [train_set, test_set] = provider(seed);
    TrainConfig a = baseline, b = perturbed;
    a.seed = b.seed = seed;
    const TrainResult ra = train(a, train_set, &test_set);
    const TrainResult rb = train(b, train_set, &test_set);
    const std::size_t classes = train_set.num_classes();
    if (report.classes.empty()) {
      report.classes.resize(classes);
      for (std::size_t c = 0; c < classes; ++c) report.classes[c].cls = c;
    }
    for (std::size_t c = 0; c < classes; ++c) {
      ClassConjecture& cc = report.classes[c];
      const double var = class_mean_variation(rb, c);
      const double eb = ra.final_test->class_error[c].value_or(0.0);
      const double ep = rb.final_test->class_error[c].value_or(0.0);
      const double imp = eb > 0.0 ? (eb - ep) / eb : -ep;
      Verdict v = Verdict::neutral;
      if (std::abs(var) > neutral_tol) v = (var > 0.0) == (imp > 0.0) && imp != 0.0 ? Verdict::agree : Verdict::disagree;
      cc.loss_variation.push_back(var);
      cc.baseline_error.push_back(eb);
      cc.perturbed_error.push_back(ep);
      cc.error_improvement.push_back(imp);
      cc.verdicts.push_back(v);
    }
  }
  return report;
}

void write_conjecture_csv(std::ostream& os, const ConjectureReport& report) {
  os << "class,seed,loss_variation,baseline_error,perturbed_error,error_improvement,verdict\n";
  for (const ClassConjecture& cc : report.classes) {
    for (std::size_t s = 0; s < report.seeds.size(); ++s) {
      os << fmt::format("{},{},{:.12g},{:.12g},{:.12g},{:.12g},{}\n", cc.cls, report.seeds[s], cc.loss_variation[s],
                        cc.baseline_error[s], cc.perturbed_error[s], cc.error_improvement[s],
                        verdict_name(cc.verdicts[s]));
    }
  }
}

}  // namespace lpl

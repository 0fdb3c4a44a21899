#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lpl/datagen.hpp"
#include "lpl/trainer.hpp"

namespace lpl {

/// Per-seed (train, test) datasets.
using DatasetProvider = std::function<std::pair<Dataset, Dataset>(std::uint64_t seed)>;

enum class Verdict { disagree = -1, neutral = 0, agree = 1 };
const char* verdict_name(Verdict v);

struct ClassConjecture {
  std::size_t cls = 0;
  /// One entry per seed.
  std::vector<double> loss_variation;     // mean over epochs, perturbed run
  std::vector<double> baseline_error;     // test error of the class
  std::vector<double> perturbed_error;
  std::vector<double> error_improvement;  // (baseline - perturbed) / baseline
  std::vector<Verdict> verdicts;

  std::size_t agree_count() const;
  std::size_t neutral_count() const;
  double mean(const std::vector<double>& v) const;
};

struct ConjectureReport {
  std::vector<std::uint64_t> seeds;
  std::vector<ClassConjecture> classes;
};

/// Loss raised during training should lower the class's relative test error
/// and vice versa. A seed agrees when the signs of the mean loss variation
/// and the error improvement match; |variation| <= neutral_tol is neutral.
/// The two configs must differ only in their perturbation settings.
ConjectureReport conjecture_report(const TrainConfig& baseline, const TrainConfig& perturbed,
                                   const DatasetProvider& provider, const std::vector<std::uint64_t>& seeds,
                                   double neutral_tol = 1e-12);

/// Header: class,seed,loss_variation,baseline_error,perturbed_error,error_improvement,verdict
void write_conjecture_csv(std::ostream& os, const ConjectureReport& report);

}  // namespace lpl

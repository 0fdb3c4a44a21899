#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lpl/datagen.hpp"
#include "lpl/dataset_io.hpp"

using namespace lpl;

namespace {

TheoryParams model(double gamma, double k) {
  TheoryParams p;
  p.d = 3;
  p.eta = 1;
  p.sigma = 1;
  p.gamma = gamma;
  p.k = k;
  return p;
}

std::string dump(const Dataset& ds) {
  std::ostringstream os;
  write_dataset_csv(os, ds);
  return os.str();
}

}  // namespace

TEST(GaussianBinary, BalancedMeans) {
  RngStream rng(1, 0);
  const std::size_t n = 20000;
  const Dataset ds = gen_gaussian_binary(model(1, 1), n, rng);
  ds.validate();
  EXPECT_EQ(ds.profile.counts, (std::vector<std::size_t>{n, n}));
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const double sign = cls == 1 ? 1.0 : -1.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds.label(i) == cls) mean += ds.features.row(static_cast<Eigen::Index>(i)).transpose();
    mean /= static_cast<double>(n);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(mean(j), sign, 4.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST(GaussianBinary, CountsAndVariance) {
  RngStream rng(2, 0);
  const Dataset ds = gen_gaussian_binary(model(10, 2), 1000, rng);
  EXPECT_EQ(ds.profile.counts[0], 10000u);
  EXPECT_EQ(ds.profile.counts[1], 1000u);
  double diag = 0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (std::size_t i = 0; i < 10000; ++i) mean += ds.features.row(static_cast<Eigen::Index>(i)).transpose();
  mean /= 1e4;
  for (std::size_t i = 0; i < 10000; ++i)
    diag += (ds.features.row(static_cast<Eigen::Index>(i)).transpose() - mean).squaredNorm();
  diag /= 3.0 * (1e4 - 1);
  EXPECT_NEAR(diag, 4.0, 0.4);
  // Ceiling of gamma * n_plus.
  RngStream r2(2, 1);
  EXPECT_EQ(gen_gaussian_binary(model(1.25, 1), 3, r2).profile.counts[0], 4u);
  RngStream r3(2, 1);
  EXPECT_THROW(gen_gaussian_binary(model(2, 1), 0, r3), std::invalid_argument);
}

TEST(GaussianBinary, Deterministic) {
  RngStream a(7, 3), b(7, 3);
  EXPECT_EQ(dump(gen_gaussian_binary(model(3, 1), 50, a)), dump(gen_gaussian_binary(model(3, 1), 50, b)));
}

TEST(LongTail, Counts) {
  RngStream rng(3, 0);
  const Dataset flat = gen_longtail_multiclass(5, 1, 40, 4, 3, rng);
  EXPECT_EQ(flat.profile.counts, std::vector<std::size_t>(5, 40));
  const Dataset lt = gen_longtail_multiclass(10, 100, 1000, 10, 3, rng);
  EXPECT_EQ(lt.profile.counts.back(), 10u);
  EXPECT_EQ(lt.profile.counts.front(), 1000u);
  for (std::size_t c = 0; c < 10; ++c) {
    EXPECT_EQ(lt.profile.counts[c],
              static_cast<std::size_t>(std::llround(1000.0 * std::pow(100.0, -static_cast<double>(c) / 9.0))));
    if (c > 0) EXPECT_LT(lt.profile.priors[c], lt.profile.priors[c - 1]);
  }
  EXPECT_TRUE(lt.profile.descending);
  EXPECT_THROW(gen_longtail_multiclass(3, 1000, 10, 2, 1, rng), std::invalid_argument);
  EXPECT_THROW(gen_longtail_multiclass(1, 1, 10, 2, 1, rng), std::invalid_argument);
}

TEST(LongTail, MeansAreSeparated) {
  for (std::size_t d : {1, 2, 5, 12}) {
    RngStream rng(4, d);
    const std::size_t classes = 6;
    const Dataset ds = gen_longtail_multiclass(classes, 1, 4000, d, 3.0, rng);
    std::vector<Eigen::VectorXd> means(classes, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)));
    for (std::size_t i = 0; i < ds.size(); ++i) means[ds.label(i)] += ds.features.row(static_cast<Eigen::Index>(i)).transpose();
    for (auto& m : means) m /= 4000.0;
    for (std::size_t a = 0; a < classes; ++a)
      for (std::size_t b = a + 1; b < classes; ++b) EXPECT_GT((means[a] - means[b]).norm(), 3.0 - 0.15) << d;
  }
}

TEST(Multilabel, FrequenciesAndDensity) {
  const auto f = multilabel_frequencies(10, 0.5, 0.15);
  double sum = 0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    sum += f[c];
    if (c > 0) EXPECT_LT(f[c], f[c - 1]);
  }
  EXPECT_NEAR(sum, 1.5, 1e-9);
  EXPECT_DOUBLE_EQ(f[0], 0.5);
  EXPECT_THROW(multilabel_frequencies(10, 0.5, 0.9), std::invalid_argument);
  EXPECT_THROW(multilabel_frequencies(10, 0.5, 1.0), std::invalid_argument);
}

TEST(Multilabel, EveryRowHasAPositiveAndNegativesDominate) {
  RngStream rng(5, 0);
  const Dataset ds = gen_multilabel(8, 2000, 0.4, 0.125, rng);
  ds.validate();
  double positives = 0;
  for (const RealVec& t : ds.targets) {
    double row = 0;
    for (double v : t) row += v;
    EXPECT_GE(row, 1.0);
    positives += row;
  }
  EXPECT_NEAR(positives / 2000.0, 1.0, 0.05);
  for (std::size_t c = 1; c < 8; ++c) EXPECT_LE(ds.profile.counts[c], ds.profile.counts[c - 1]);
  EXPECT_EQ(ds.dim(), 8u);
}

TEST(Multilabel, DeterministicAndPrototypesSharedAcrossStreams) {
  RngStream a(6, 100), b(6, 100);
  EXPECT_EQ(dump(gen_multilabel(5, 100, 0.5, 0.3, a)), dump(gen_multilabel(5, 100, 0.5, 0.3, b)));
  // Rows with identical labels in different streams differ only by noise.
  RngStream s1(6, 100), s2(6, 101);
  const Dataset x = gen_multilabel(5, 3000, 0.5, 0.3, s1, 5, 10.0);
  const Dataset y = gen_multilabel(5, 3000, 0.5, 0.3, s2, 5, 10.0);
  auto mean_of_first_only = [](const Dataset& ds) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(5);
    int n = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.targets[i] == RealVec{1, 0, 0, 0, 0}) {
        m += ds.features.row(static_cast<Eigen::Index>(i)).transpose();
        ++n;
      }
    }
    return Eigen::VectorXd(m / n);
  };
  EXPECT_LT((mean_of_first_only(x) - mean_of_first_only(y)).norm(), 0.5);
}

TEST(Dataset, SubsetAndValidate) {
  RngStream rng(8, 0);
  const Dataset ds = gen_longtail_multiclass(3, 2, 20, 2, 2, rng);
  const Dataset sub = ds.subset({0, 19, 25});
  sub.validate();
  EXPECT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub.profile.counts[0], 2u);
  Dataset broken = ds;
  broken.profile.counts[0] += 1;
  EXPECT_THROW(broken.validate(), std::invalid_argument);
}

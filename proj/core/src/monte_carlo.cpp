#include "lpl/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace lpl {
namespace {

void fill_projections(std::vector<double>& out, std::size_t begin, std::size_t end, int d, double mean, double sd,
                      RngStream rng) {
  for (std::size_t i = begin; i < end; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += rng.normal(mean, sd);
    out[i] = s;
  }
}

std::size_t count_above(const std::vector<double>& sorted, double threshold) {
  return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold));
}

}  // namespace

McSample mc_sample(const TheoryParams& p, std::size_t n, const RngStream& rng, std::size_t shards) {
  p.validate();
  if (n == 0) throw std::invalid_argument("mc_sample: n must be positive");
  if (shards == 0) throw std::invalid_argument("mc_sample: shards must be positive");
  McSample out;
  out.plus.resize(n);
  out.minus.resize(n);

  std::vector<std::thread> workers;
  const std::size_t chunk = (n + shards - 1) / shards;
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = std::min(n, s * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    const RngStream plus_rng = rng.derive(2 * s);
    const RngStream minus_rng = rng.derive(2 * s + 1);
    auto job = [&out, &p, begin, end, plus_rng, minus_rng] {
      fill_projections(out.plus, begin, end, p.d, p.eta, p.sigma, plus_rng);
      fill_projections(out.minus, begin, end, p.d, -p.eta, p.k * p.sigma, minus_rng);
    };
    if (shards == 1) {
      job();
    } else {
      workers.emplace_back(job);
    }
  }
  for (auto& w : workers) w.join();
  return out;
}

McErrorEstimate mc_error_estimate(const McSample& sample, const TheoryParams& p, Theorem theorem, double bias) {
  p.validate();
  if (sample.plus.empty() || sample.minus.empty()) throw std::invalid_argument("mc_error_estimate: empty sample");
  const ClassShifts shift = perturbation_shifts(p, theorem);

  // Class +1 is misclassified when u <= 0, class -1 when u > 0.
  std::size_t nat_plus = 0, nat_minus = 0, per_plus = 0, per_minus = 0;
  for (double x : sample.plus) {
    nat_plus += x + bias <= 0.0;
    per_plus += x + bias + shift.plus <= 0.0;
  }
  for (double x : sample.minus) {
    nat_minus += x + bias > 0.0;
    per_minus += x + bias + shift.minus > 0.0;
  }
  const auto np = static_cast<double>(sample.plus.size());
  const auto nm = static_cast<double>(sample.minus.size());

  McErrorEstimate e;
  e.n = std::min(sample.plus.size(), sample.minus.size());
  e.natural = make_error_pair(static_cast<double>(nat_minus) / nm, static_cast<double>(nat_plus) / np, p.gamma);
  e.perturbed = make_error_pair(static_cast<double>(per_minus) / nm, static_cast<double>(per_plus) / np, p.gamma);
  e.se_minus = std::sqrt(e.natural.err_minus * (1.0 - e.natural.err_minus) / nm);
  e.se_plus = std::sqrt(e.natural.err_plus * (1.0 - e.natural.err_plus) / np);
  return e;
}

McErrorEstimate mc_error_estimate(const TheoryParams& p, Theorem theorem, double bias, std::size_t n,
                                  const RngStream& rng, std::size_t shards) {
  if (n < kMinMcSamples) throw std::invalid_argument("mc_error_estimate: n must be at least 10^4");
  return mc_error_estimate(mc_sample(p, n, rng, shards), p, theorem, bias);
}

McBiasSearch mc_grid_search_bias(const McSample& sample, const TheoryParams& p, Theorem theorem, double lo,
                                 double hi, double step) {
  p.validate();
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("mc_grid_search_bias: bad grid");
  if (sample.plus.empty() || sample.minus.empty()) throw std::invalid_argument("mc_grid_search_bias: empty sample");
  const ClassShifts shift = perturbation_shifts(p, theorem);
  std::vector<double> plus = sample.plus;
  std::vector<double> minus = sample.minus;
  std::sort(plus.begin(), plus.end());
  std::sort(minus.begin(), minus.end());
  const auto np = static_cast<double>(plus.size());
  const auto nm = static_cast<double>(minus.size());

  const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  McBiasSearch best{lo, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i <= steps; ++i) {
    const double b = lo + static_cast<double>(i) * step;
    // x + b + shift <= 0  <=>  x <= -(b + shift); strict > for the other class.
    const double ep = static_cast<double>(np - count_above(plus, -(b + shift.plus))) / np;
    const double em = static_cast<double>(count_above(minus, -(b + shift.minus))) / nm;
    const double v = ep + p.gamma * em;
    if (v < best.value) best = {b, v};
  }
  return best;
}

}  // namespace lpl

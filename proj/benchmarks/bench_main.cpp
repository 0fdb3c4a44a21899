#include <benchmark/benchmark.h>

#include <vector>

#include "lpl/monte_carlo.hpp"
#include "lpl/perturbation.hpp"
#include "lpl/trainer.hpp"

using namespace lpl;

namespace {

std::vector<RealVec> random_logits(std::size_t n, std::size_t c, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<RealVec> u(n, RealVec(c));
  for (auto& row : u)
    for (double& v : row) v = rng.normal(0, 2);
  return u;
}

void BM_PgdPerturb(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto u = random_logits(32, c, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pgd_perturb(u, 0, 0.3, 0.01, Direction::maximize));
}
BENCHMARK(BM_PgdPerturb)->Arg(10)->Arg(100);

void BM_LplLossSingle(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto u = random_logits(128, c, 2);
  std::vector<std::size_t> labels(u.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % c;
  const LogitBatch batch = LogitBatch::single_label(u, labels);
  const CategorySplit split = split_by_index(c, static_cast<double>(c) / 2);
  BoundVector bounds{RealVec(c, 0.1), std::vector<std::size_t>(c, 10)};
  for (auto _ : state) benchmark::DoNotOptimize(lpl_loss_single(batch, split, bounds, 0.01));
}
BENCHMARK(BM_LplLossSingle)->Arg(10)->Arg(100);

void BM_MonteCarloErrors(benchmark::State& state) {
  TheoryParams p;
  p.gamma = 2;
  p.epsilon = 0.2;
  const double b = optimal_bias(p, Theorem::one);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_error_estimate(p, Theorem::one, b, n, RngStream(3, 0)));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0) * 2);
}
BENCHMARK(BM_MonteCarloErrors)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  RngStream rng(4, 0);
  const Dataset data = gen_longtail_multiclass(10, 10, 200, 10, 3.0, rng);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.arch = Architecture::mlp;
  if (state.range(0) != 0) {
    cfg.method = Method::lpl;
    cfg.lpl.mode = SplitMode::longtail_index;
    cfg.lpl.tau = 5;
    cfg.lpl.epsilon = 0.1;
  }
  for (auto _ : state) benchmark::DoNotOptimize(train(cfg, data));
  state.SetLabel(state.range(0) != 0 ? "lpl" : "none");
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <bit>
#include <cstdint>
#include <vector>

#include "wrg/analytics.hpp"
#include "wrg/rng.hpp"
#include "wrg/simulator.hpp"
#include "wrg/special_fn.hpp"
#include "wrg/weight_model.hpp"

namespace {

using namespace wrg;

WeightModel model_for(int id) {
  switch (id) {
    case 1: return WeightModel::atom_mixture(0.5, AtomBase::uniform(0.3, 0.9));
    case 2: return WeightModel::beta_conditioned(2.0, 2.0, 0.1);
    case 3: return WeightModel::gamma_fraction(0.0, 1.0, 0.2);
    default: return WeightModel::degenerate();
  }
}

void BM_Growth(benchmark::State& state) {
  GrowthConfig cfg;
  cfg.n = static_cast<std::uint64_t>(state.range(0));
  cfg.model = model_for(static_cast<int>(state.range(1)));
  cfg.seed = 42;
  cfg.track_top_k = 0;
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto ledger = grow(cfg, rep++);
    benchmark::DoNotOptimize(ledger.indeg.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(cfg.n - 1));
}

// The growth loop picks attachment targets by rejection against the running
// weight prefix sums. A Fenwick tree over the weights is the textbook
// alternative; this measures the raw pick throughput of both on a frozen
// weight vector so the trade-off stays visible.
void BM_PickRejection(benchmark::State& state) {
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  const auto model = model_for(static_cast<int>(state.range(1)));
  RngStream rng = RngStream::from_seed(7, 0);
  std::vector<double> w(n);
  for (auto& x : w) x = model.sample(rng);
  std::uint64_t sink = 0;
  for (auto _ : state) {
    std::uint64_t j;
    do {
      j = rng.next_below(n);
    } while (rng.next_unit() >= w[j]);
    sink += j;
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}

void BM_PickFenwick(benchmark::State& state) {
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  const auto model = model_for(static_cast<int>(state.range(1)));
  RngStream rng = RngStream::from_seed(7, 0);
  std::vector<double> tree(n + 1, 0.0);
  double total = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double w = model.sample(rng);
    total += w;
    for (std::uint64_t j = i; j <= n; j += j & (~j + 1)) tree[j] += w;
  }
  std::uint64_t sink = 0;
  for (auto _ : state) {
    double target = rng.next_unit() * total;
    std::uint64_t pos = 0;
    std::uint64_t step = std::bit_floor(n);
    for (; step > 0; step >>= 1) {
      const std::uint64_t next = pos + step;
      if (next <= n && tree[next] < target) {
        target -= tree[next];
        pos = next;
      }
    }
    sink += pos;
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}

void BM_WeightSampling(benchmark::State& state) {
  const auto model = model_for(static_cast<int>(state.range(0)));
  RngStream rng = RngStream::from_seed(11, 0);
  double sink = 0.0;
  for (auto _ : state) sink += model.sample(rng);
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}

void BM_FiniteNLaw(benchmark::State& state) {
  const auto model = model_for(static_cast<int>(state.range(0)));
  double sink = 0.0;
  for (auto _ : state)
    sink += analytics::finite_n_joint_law(model, 1e6, 20, 100.0).at_least_upper;
  benchmark::DoNotOptimize(sink);
}

void BM_LambertW(benchmark::State& state) {
  double y = 0.1;
  double sink = 0.0;
  for (auto _ : state) {
    sink += special::lambert_w(special::Branch::Negative, -0.3 * y);
    y = y < 0.9 ? y + 1e-4 : 0.1;
  }
  benchmark::DoNotOptimize(sink);
}

BENCHMARK(BM_Growth)->ArgsProduct({{10000, 100000, 1000000}, {0, 1, 3}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PickRejection)->ArgsProduct({{100000, 1000000}, {0, 1, 2}});
BENCHMARK(BM_PickFenwick)->ArgsProduct({{100000, 1000000}, {0, 1, 2}});
BENCHMARK(BM_WeightSampling)->DenseRange(0, 3);
BENCHMARK(BM_FiniteNLaw)->DenseRange(0, 3);
BENCHMARK(BM_LambertW);

}  // namespace

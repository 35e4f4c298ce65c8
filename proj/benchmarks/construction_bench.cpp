// Per-model construction cost: model -> IPG -> minimal models, by observable count.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "semimarkov/construction.hpp"
#include "semimarkov/equivalence.hpp"
#include "semimarkov/random.hpp"
#include "semimarkov/separation.hpp"

namespace {

using namespace semimarkov;

std::vector<MixedGraph> corpus(std::size_t observables) {
  std::mt19937_64 rng(observables);
  std::vector<MixedGraph> out;
  while (out.size() < 32) {
    auto m = random_model(rng, {observables, 2, 0.3});
    // Expansions add one latent per bidirected edge; stay inside the default bound.
    std::size_t bidirected = 0;
    for (const auto& e : ipg_of(m).edges()) bidirected += e.at_u == Mark::Arrow ? 1 : 0;
    if (observables + bidirected <= kDefaultMaxVertices) out.push_back(std::move(m));
  }
  return out;
}

void BM_Ipg(benchmark::State& state) {
  const auto models = corpus(static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ipg_of(models[k++ % models.size()]));
  }
}
BENCHMARK(BM_Ipg)->DenseRange(3, 8);

void BM_MinimalModels(benchmark::State& state) {
  const auto models = corpus(static_cast<std::size_t>(state.range(0)));
  std::vector<MixedGraph> ipgs;
  for (const auto& m : models) ipgs.push_back(ipg_of(m));
  std::size_t k = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(minimal_models(ipgs[k++ % ipgs.size()]));
    } catch (const BoundError&) {
      state.SkipWithError("bound exceeded");
      break;
    }
  }
}
BENCHMARK(BM_MinimalModels)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_MdgTetrad(benchmark::State& state) {
  const auto models = corpus(static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdg_of(models[k++ % models.size()], {MdgMode::Tetrad}));
  }
}
BENCHMARK(BM_MdgTetrad)->DenseRange(3, 8);

void BM_Signature(benchmark::State& state) {
  const auto models = corpus(static_cast<std::size_t>(state.range(0)));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d_separation_signature(models[k++ % models.size()]));
  }
}
BENCHMARK(BM_Signature)->DenseRange(3, 8);

}  // namespace

BENCHMARK_MAIN();

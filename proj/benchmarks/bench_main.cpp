#include "lipfree/decomposition.hpp"
#include "lipfree/derivation.hpp"
#include "lipfree/diamond.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/rng.hpp"

#include <benchmark/benchmark.h>

using namespace lipfree;

namespace {

std::shared_ptr<const Diamond> diamond(const char *alpha, std::size_t n, std::size_t width = 1)
{
  DiamondSpec spec;
  spec.alpha = Ordinal::parse(alpha);
  spec.branches = n;
  spec.limit_width = width;
  return Diamond::build(spec);
}

void BM_BuildSuccessor(benchmark::State &state)
{
  const auto level = std::to_string(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(diamond(level.c_str(), 3));
}
BENCHMARK(BM_BuildSuccessor)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_BuildLimit(benchmark::State &state)
{
  for (auto _ : state)
    benchmark::DoNotOptimize(diamond("w", 3, 3));
}
BENCHMARK(BM_BuildLimit)->Unit(benchmark::kMillisecond);

// Random vectors with `range(0)` support points on D_3[3].
void BM_FreeNorm(benchmark::State &state)
{
  const auto d = diamond("3", 3);
  const auto &s = d->space();
  Rng rng(1);
  std::vector<FreeVector> pool;
  for (int k = 0; k < 64; ++k) {
    FreeVector v;
    for (int t = 0; t < state.range(0); ++t)
      v.add(rng.below(s.size()), ratio(rng.between(-6, 6), rng.between(1, 4)));
    pool.push_back(std::move(v));
  }
  std::size_t k = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(free_norm(s, pool[k++ % pool.size()]));
}
BENCHMARK(BM_FreeNorm)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMicrosecond);

void BM_ProveAndVerify(benchmark::State &state)
{
  const auto depth = static_cast<std::size_t>(state.range(0));
  const auto d = diamond(std::to_string(depth).c_str(), 3);
  AdversaryConfig config;
  config.kind = AdversaryKind::random_lipschitz;
  for (auto _ : state) {
    const auto t = prover_certify(d, depth, config);
    benchmark::DoNotOptimize(verify_transcript(d->space(), t));
  }
}
BENCHMARK(BM_ProveAndVerify)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Decomposition(benchmark::State &state)
{
  const auto w = diamond("w", 3, 3);
  for (auto _ : state) {
    const auto cover = build_cover(*w);
    const auto sub = a_subspace(*w, cover);
    benchmark::DoNotOptimize(equivalence_constants(sub.space, summing_metric(sub.space, sub.partition)));
  }
}
BENCHMARK(BM_Decomposition)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

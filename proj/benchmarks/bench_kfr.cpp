#include <benchmark/benchmark.h>

#include "kfr/fusion.hpp"
#include "kfr/krein.hpp"
#include "kfr/linalg.hpp"
#include "kfr/random.hpp"
#include "kfr/spectral.hpp"
#include "kfr/transfer.hpp"

using namespace kfr;

static void SymmetricEig(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const SymmetricMatrix m = random_symmetric(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eig(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SymmetricEig)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void GramBuild(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const SymmetricMatrix w = random_gram(d, 10.0, true, rng);
  for (auto _ : state) benchmark::DoNotOptimize(GramOperator::build(w));
}
BENCHMARK(GramBuild)->RangeMultiplier(2)->Range(4, 64);

static void KreinFrameBounds(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const GramOperator g = GramOperator::build(random_gram(d, 10.0, true, rng));
  const WeightedSubspaceFamily f = random_family(d, 3, (d + 2) / 3, rng, 0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(frame_bounds(f, FrameSetting::krein(g)));
}
BENCHMARK(KreinFrameBounds)->RangeMultiplier(2)->Range(4, 64);

static void FourWay(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const GramOperator g = GramOperator::build(random_gram(d, 10.0, true, rng));
  const WeightedSubspaceFamily f = random_family(d, 3, (d + 2) / 3, rng, 0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(verify_four_way_equivalence(f, g));
}
BENCHMARK(FourWay)->Arg(6)->Arg(16);

static void SpectralDecomposition(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<std::size_t> plan(d / 2, 2);
  const GramOperator g = GramOperator::build(planted_gram(plan, rng));
  for (auto _ : state) {
    const auto rep = spectral_representation(g);
    benchmark::DoNotOptimize(krein_decomposition(g, rep));
  }
}
BENCHMARK(SpectralDecomposition)->RangeMultiplier(2)->Range(4, 64);

static void DiagonalSweep(benchmark::State& state) {
  Rng rng(6);
  const WeightedSubspaceFamily f = random_family(4, 3, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(singular_sweep(f, diagonal_family(4), kDefaultSweepEpsilons));
}
BENCHMARK(DiagonalSweep);

BENCHMARK_MAIN();

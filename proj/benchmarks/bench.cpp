#include <benchmark/benchmark.h>

#include <random>

#include "j2kit/bisim.hpp"
#include "j2kit/corpus.hpp"
#include "j2kit/decide.hpp"
#include "j2kit/gl.hpp"
#include "j2kit/unify.hpp"

using namespace j2kit;

namespace {

Formula f1(const char* s) { return parse(s, VarContext::standard(1)); }

// A chain of sheets, each a two-world R1 pair, with alternating valuations.
StratifiedModel layered(int sheets) {
  StratifiedModel::Parts p;
  for (int s = 0; s < sheets; ++s) {
    for (int k = 0; k < 2; ++k) {
      p.sheet_of.push_back(s);
      p.val.push_back(static_cast<Valuation>((s + k) & 1));
      p.r1.push_back(k == 0 ? bit(2 * s + 1) : 0);
    }
    std::uint64_t above = 0;
    for (int t = s + 1; t < sheets; ++t) above |= std::uint64_t{1} << t;
    p.sheet_above.push_back(above);
  }
  return StratifiedModel::from_parts(std::move(p));
}

void BM_Parse(benchmark::State& state) {
  const auto ctx = VarContext::standard(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse("[0](p1 -> <1>(p2 & ~[0]F)) | [1][1]p1 & <0>~p2", ctx));
  }
}
BENCHMARK(BM_Parse);

void BM_TruthSet(benchmark::State& state) {
  const StratifiedModel m = layered(static_cast<int>(state.range(0)));
  const Formula f = f1("[0](p1 -> <1>~p1) & [1]([1]p1 -> p1)");
  for (auto _ : state) benchmark::DoNotOptimize(truth_set(m, f));
}
BENCHMARK(BM_TruthSet)->Arg(4)->Arg(16)->Arg(32);

void BM_WorldCodes(benchmark::State& state) {
  const StratifiedModel m = layered(16);
  for (auto _ : state) benchmark::DoNotOptimize(world_codes(m, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_WorldCodes)->Arg(1)->Arg(2)->Arg(3);

void BM_EnumerateTypesDepth2(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_types(1, 2, Bounds{}));
}
BENCHMARK(BM_EnumerateTypesDepth2)->Unit(benchmark::kMillisecond);

void BM_IsTheorem(benchmark::State& state) {
  const Formula f = f1("[0]([0]p1 -> p1) -> [0]p1");
  for (auto _ : state) benchmark::DoNotOptimize(is_theorem(f, Bounds{}, 1));
}
BENCHMARK(BM_IsTheorem)->Unit(benchmark::kMicrosecond);

void BM_GlProjectiveUnifier(benchmark::State& state) {
  const Formula f = f1("p1 | ~[1]p1");
  for (auto _ : state) benchmark::DoNotOptimize(gl_projective_unifier(f, Bounds{}, 1));
}
BENCHMARK(BM_GlProjectiveUnifier)->Unit(benchmark::kMillisecond);

void BM_ProjectiveUnifier(benchmark::State& state) {
  const Formula f = f1("[1]p1 -> p1");
  for (auto _ : state) benchmark::DoNotOptimize(projective_unifier(f, Bounds{}, 1));
}
BENCHMARK(BM_ProjectiveUnifier)->Unit(benchmark::kMillisecond);

void BM_ProjectiveApproximation(benchmark::State& state) {
  const Formula f = f1("[0]p1 | [0]~p1");
  for (auto _ : state) benchmark::DoNotOptimize(projective_approximation(f, Bounds{}, 1));
}
BENCHMARK(BM_ProjectiveApproximation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

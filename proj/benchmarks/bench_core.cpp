#include <benchmark/benchmark.h>

#include <random>

#include "edif/average_property.hpp"
#include "edif/flat_coding.hpp"
#include "edif/forcing.hpp"

using namespace edif;

namespace {

const Condition& chain(std::size_t n) {
  static std::vector<Condition> cache{Condition::trivial()};
  while (cache.size() <= n) cache.push_back(advance(cache.back()));
  return cache[n];
}

void BM_KernelIntegral(benchmark::State& state) {
  KernelSum s{KSKernel(1, Rational(3, 2) * pow2(24), Rational(1, 3)), KSKernel(Rational(1, 2), 1, 0)};
  double lo = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integral(s, lo, 2.0));
    lo += 1e-9;
  }
}
BENCHMARK(BM_KernelIntegral);

void BM_CheckAP(benchmark::State& state) {
  RealFunction psi = make_function({KSKernel(1, 1, 0)});
  auto pairs = PairSampler(1, static_cast<std::size_t>(state.range(0))).pairs();
  for (auto _ : state) benchmark::DoNotOptimize(check_ap(psi, 4.0, pairs).worst_raw);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CheckAP)->Arg(1000)->Arg(100000);

void BM_EvalG(benchmark::State& state) {
  const Condition& c = chain(static_cast<std::size_t>(state.range(0)));
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.rep.g_at(x));
    x = x > 3.0 ? -3.0 : x + 0.001;
  }
}
BENCHMARK(BM_EvalG)->DenseRange(0, 6, 2);

void BM_EvalF(benchmark::State& state) {
  const Condition& c = chain(static_cast<std::size_t>(state.range(0)));
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.rep.f_at(x).value);
    x = x > 3.0 ? -3.0 : x + 0.001;
  }
}
BENCHMARK(BM_EvalF)->DenseRange(0, 6, 2);

void BM_Advance(benchmark::State& state) {
  const Condition& c = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(advance(c).N());
}
BENCHMARK(BM_Advance)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Validate(benchmark::State& state) {
  const Condition& c = chain(6);
  for (auto _ : state) benchmark::DoNotOptimize(validate(c).ok());
}
BENCHMARK(BM_Validate)->Unit(benchmark::kMillisecond);

void BM_Construction(benchmark::State& state) {
  GridPool grid(-4, 4, -16, 0, 2, 61);
  std::vector<LabeledPoint> targets;
  for (long v : {300L, -450L, 720L, -150L}) targets.push_back({Rational(v, 1000), {0, 1}});
  for (auto& t : targets) t.v.canonicalize();
  for (auto _ : state) benchmark::DoNotOptimize(run_construction(grid, nullptr, targets, 4).condition.N());
}
BENCHMARK(BM_Construction)->Unit(benchmark::kMillisecond);

void BM_Decode(benchmark::State& state) {
  std::mt19937_64 rng(1);
  BlockSchedule g = BlockSchedule::minimal();
  TinyFamily fam = TinyFamily::polylog(1.0, 2);
  std::vector<TernaryPoint> ys;
  for (int i = 0; i < 4; ++i) ys.push_back(random_tiny_point(g, 256, fam, rng));
  for (auto _ : state) benchmark::DoNotOptimize(decode(ys, g, 256).x.depth());
}
BENCHMARK(BM_Decode);

}  // namespace

BENCHMARK_MAIN();

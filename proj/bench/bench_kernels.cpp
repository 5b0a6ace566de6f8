// Serial against parallel timings for the grid kernels.
#include <benchmark/benchmark.h>

#include "bbe/library.hpp"

using namespace bbe;

namespace {

Exec execOf(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_Raster(benchmark::State& st) {
  const Game g = hotellingGame();
  const MembershipContext ctx = membershipContext(g, static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rasterizeRegion(ctx, execOf(st)));
}
BENCHMARK(BM_Raster)->ArgsProduct({{0, 1}, {100, 200}})->Unit(benchmark::kMillisecond);

void BM_BruteForceNash(benchmark::State& st) {
  const IntervalGame g = cournotCapacityGame();
  for (auto _ : st) benchmark::DoNotOptimize(bruteForceNash(g, static_cast<int>(st.range(1)), 1e-9, execOf(st)));
}
BENCHMARK(BM_BruteForceNash)->ArgsProduct({{0, 1}, {200, 400}})->Unit(benchmark::kMillisecond);

void BM_VerifyStackelberg(benchmark::State& st) {
  const Game g = cournotGame();
  Configuration c;
  c.beliefs = {BiasedBelief::blind(Strategy(0.0)), BiasedBelief::identity()};
  c.strategies = {Strategy(0.5), Strategy(0.25)};
  VerifyOptions opt;
  opt.exec = execOf(st);
  for (auto _ : st) benchmark::DoNotOptimize(verify(g, c, Claim::Strong, {}, opt));
}
BENCHMARK(BM_VerifyStackelberg)->ArgsProduct({{0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

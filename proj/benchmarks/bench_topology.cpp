#include <benchmark/benchmark.h>

#include <map>
#include "islandlab/interpolate.hpp"
#include "islandlab/pipeline.hpp"

using namespace islandlab;

namespace {

struct IslandCase {
  CaseContext ctx;
  ScalarField field;
};

const IslandCase& island_case(int n) {
  static std::map<int, IslandCase> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    BoundaryShape shape = BoundaryShape::flat_channel();
    shape.top_bump = FourierSeries::cosine(1, 1.0);
    CaseContext ctx = prepare_case(shape, Nonlinearity::constant(-1.0), n, n + 1);
    RunOptions opts;
    opts.deltas = {};
    EpsilonRun run = run_epsilon(ctx, 0.02, opts);
    it = cache.emplace(n, IslandCase{std::move(ctx), std::move(run.steady.field)}).first;
  }
  return it->second;
}

void BM_SamplerEval(benchmark::State& state) {
  const IslandCase& c = island_case(128);
  const FieldSampler sampler(c.field);
  double x = 0.1, s = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.ref(x, s));
    x += 0.37;
    if (x > 6.0) x -= 6.0;
    s = 0.2 + 0.6 * (x / 6.0);
  }
}
BENCHMARK(BM_SamplerEval);

void BM_FindCriticalPoints(benchmark::State& state) {
  const IslandCase& c = island_case(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_critical_points(c.field));
  }
}
BENCHMARK(BM_FindCriticalPoints)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_TraceLevelSet(benchmark::State& state) {
  const IslandCase& c = island_case(128);
  const double level = 0.5 * (c.field.min() + c.field.max());
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_level_set(c.field, level, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_TraceLevelSet)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DetectIslands(benchmark::State& state) {
  const IslandCase& c = island_case(128);
  const std::vector<double> deltas{0.1, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_islands(c.field, c.ctx.profile, deltas));
  }
}
BENCHMARK(BM_DetectIslands)->Unit(benchmark::kMillisecond);

}  // namespace

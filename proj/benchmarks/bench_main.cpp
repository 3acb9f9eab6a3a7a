#include <benchmark/benchmark.h>

#include "skelnav/navmetrics.hpp"
#include "skelnav/neuroskel.hpp"
#include "skelnav/planners.hpp"
#include "skelnav/skeleton.hpp"

using namespace skelnav;

namespace {

OccupancyGrid bench_map() {
  GenParams p;
  p.seed = 42;
  return generate_dungeon(p);
}

void BM_ZhangSuen(benchmark::State& state) {
  const auto g = bench_map();
  for (auto _ : state) benchmark::DoNotOptimize(zhang_suen(g));
}
BENCHMARK(BM_ZhangSuen);

void BM_DistanceTransform(benchmark::State& state) {
  const auto g = bench_map();
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(g));
}
BENCHMARK(BM_DistanceTransform);

void BM_Forward(benchmark::State& state) {
  const auto g = bench_map();
  const auto params = constant_parameters(0.01f);
  for (auto _ : state) benchmark::DoNotOptimize(forward(params, g));
}
BENCHMARK(BM_Forward)->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
  const auto ctx = MapContext::from_grid(bench_map());
  const auto mask = zhang_suen(ctx.grid);
  BuildOptions opt;
  opt.k_nearest = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(mask, ctx.grid, ctx.obstacles, opt));
}
BENCHMARK(BM_BuildGraph)->Arg(4)->Arg(6)->Arg(10);

void BM_OnlineQuery(benchmark::State& state) {
  const auto ctx = MapContext::from_grid(bench_map());
  const auto planner = PreparedPlanner::prepare(PlannerKind::ZhangSuen, ctx, PlannerOptions{});
  const auto queries = sample_queries(ctx.grid, 64, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(planner.plan(ctx, queries[i++ % queries.size()]));
}
BENCHMARK(BM_OnlineQuery);

void BM_GridAStar(benchmark::State& state) {
  const auto g = bench_map();
  const auto queries = sample_queries(g, 64, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(grid_astar(g, queries[i++ % queries.size()]));
}
BENCHMARK(BM_GridAStar);

}  // namespace

BENCHMARK_MAIN();

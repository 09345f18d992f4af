#include <benchmark/benchmark.h>

#include "jpesp/oracle.hpp"
#include "jpesp/search.hpp"

using namespace jpesp;

namespace {

Scenario world(int J, int U, int M, std::uint64_t seed) {
  GenerationSpec g;
  g.vertices = J;
  g.devices = U;
  g.tasks = M;
  g.classes_per_task = {U / M};
  g.seed = seed;
  return generate_scenario(g);
}

void BM_SolveInner(benchmark::State& state) {
  const auto s = world(12, static_cast<int>(state.range(0)), 1, 1);
  const auto route = plan_route(all_vertices(12), s.distances, s.config);
  for (auto _ : state) benchmark::DoNotOptimize(solve_inner(s, route));
}
BENCHMARK(BM_SolveInner)->Arg(2)->Arg(10)->Arg(40);

void BM_ExactTsp(benchmark::State& state) {
  const auto J = static_cast<int>(state.range(0));
  const auto s = world(J, 1, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_tsp(all_vertices(J), s.distances, TspMode::Exact));
}
BENCHMARK(BM_ExactTsp)->DenseRange(6, 15, 3);

void BM_HeuristicTsp(benchmark::State& state) {
  const auto J = static_cast<int>(state.range(0));
  const auto s = world(J, 1, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_tsp(all_vertices(J), s.distances, TspMode::Heuristic));
}
BENCHMARK(BM_HeuristicTsp)->Arg(15)->Arg(40);

void BM_Omega(benchmark::State& state) {
  const auto s = world(12, 20, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(omega(s, all_vertices(12)));
}
BENCHMARK(BM_Omega);

void BM_GridOracle(benchmark::State& state) {
  const auto s = world(3, 2, 1, 4);
  const Selection sel{1, 1, 1};
  const auto route = plan_route(sel, s.distances, s.config);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::grid_inner_oracle(s, sel, route.edges, state.range(0)));
}
BENCHMARK(BM_GridOracle)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_TabuSolve(benchmark::State& state) {
  const auto s = world(12, 20, 2, 5);
  TabuParams p;
  p.max_iter = 50;
  for (auto _ : state) benchmark::DoNotOptimize(tabu_solve(s, p));
}
BENCHMARK(BM_TabuSolve)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rankmatch/assignment.h"
#include "rankmatch/distributions.h"
#include "rankmatch/order_statistics.h"
#include "rankmatch/sparse.h"

namespace rankmatch {
namespace {

void BM_DenseHungarian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> w(-10.0, 0.0);
  std::vector<double> weights(n * n);
  for (double& x : weights) x = w(rng);
  const AssignmentProblem p(n, n, std::move(weights));
  for (auto _ : state) benchmark::DoNotOptimize(solve_max_matching(p).objective);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseHungarian)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond)->Complexity();

// n per group, k = 4 groups.
void BM_NkNaive(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const GroupedProblem p = random_grouped_problem(static_cast<int>(state.range(0)), 4, 10.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_nk_naive(p.weights, p.capacities).objective);
}
BENCHMARK(BM_NkNaive)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_NkSparse(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const GroupedProblem p = random_grouped_problem(static_cast<int>(state.range(0)), 4, 10.0, rng);
  for (auto _ : state) {
    std::mt19937_64 g(3);
    benchmark::DoNotOptimize(solve_nk_sparse(p, g).result.objective);
  }
}
BENCHMARK(BM_NkSparse)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OrderStatisticTable(benchmark::State& state) {
  const DiscreteDistribution base =
      discretize([](double x) { return gaussian_pdf(x, 0.0, 1.0); }, -5.0, 5.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(order_statistic_table(base, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_OrderStatisticTable)->Arg(25)->Arg(50)->Arg(200);

}  // namespace
}  // namespace rankmatch

BENCHMARK_MAIN();

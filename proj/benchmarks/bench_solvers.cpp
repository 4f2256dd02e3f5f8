#include "fpaccel/anderson.hpp"
#include "fpaccel/datagen.hpp"
#include "fpaccel/operators.hpp"
#include "fpaccel/theory.hpp"

#include <benchmark/benchmark.h>

using namespace fpaccel;

namespace {

std::vector<Vector> make_window(int count, Index dim) {
  SplitMix64 g(7);
  std::vector<Vector> window;
  for (int i = 0; i < count; ++i) window.push_back(normal_vector(g, dim));
  return window;
}

void BM_SubproblemUnbounded(benchmark::State& state) {
  const auto window = make_window(static_cast<int>(state.range(0)), 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aa_solve_subproblem(window, kUnbounded, 1e-12));
  }
}
BENCHMARK(BM_SubproblemUnbounded)->Arg(2)->Arg(3)->Arg(4);

void BM_SubproblemBounded(benchmark::State& state) {
  const auto window = make_window(static_cast<int>(state.range(0)), 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aa_solve_subproblem(window, 1e4, 1e-12));
  }
}
BENCHMARK(BM_SubproblemBounded)->Arg(2)->Arg(3)->Arg(4);

void BM_LinearSolve(benchmark::State& state) {
  const auto op = make_random_symmetric(100, -0.9, 0.9, -0.95, 1);
  SplitMix64 g(1);
  const Vector x0 = normal_vector(g, 100);
  const int depth = static_cast<int>(state.range(0));
  AAConfig cfg;
  cfg.depth = depth > 0 ? depth : 1;
  cfg.max_iterations = 5000;
  for (auto _ : state) {
    if (depth == 0) {
      benchmark::DoNotOptimize(fp_iterate(op, x0, 1e-12, 5000));
    } else {
      benchmark::DoNotOptimize(aa_solve(op, x0, cfg));
    }
  }
}
BENCHMARK(BM_LinearSolve)->Arg(0)->Arg(1)->Arg(2)->Arg(3);

void BM_ComputeW0(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_w0(-0.6, 0.62));
  }
}
BENCHMARK(BM_ComputeW0);

}  // namespace

BENCHMARK_MAIN();

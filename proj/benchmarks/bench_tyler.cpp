#include "fpaccel/anderson.hpp"
#include "fpaccel/datagen.hpp"
#include "fpaccel/tyler.hpp"

#include <benchmark/benchmark.h>

using namespace fpaccel;

namespace {

void BM_LogStep(benchmark::State& state) {
  const auto prob = gen_data_model_1(static_cast<int>(state.range(0)),
                                     2 * static_cast<int>(state.range(0)), 1);
  const Vector w = Vector::Zero(prob.n());
  for (auto _ : state) {
    benchmark::DoNotOptimize(tme_log_step(w, prob));
  }
}
BENCHMARK(BM_LogStep)->Arg(20)->Arg(50)->Arg(100);

void BM_StandardStep(benchmark::State& state) {
  const auto prob = gen_data_model_1(static_cast<int>(state.range(0)),
                                     2 * static_cast<int>(state.range(0)), 1);
  const ShapeMatrix sigma{Matrix::Identity(prob.p(), prob.p()), true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tme_standard_step(sigma, prob));
  }
}
BENCHMARK(BM_StandardStep)->Arg(20)->Arg(50)->Arg(100);

void BM_AcceleratedEstimate(benchmark::State& state) {
  const auto prob = gen_data_model_1(20, 40, 1);
  const FunctionOperator op = make_tme_log_operator(prob);
  SplitMix64 g(3);
  const Vector w0 = normal_vector(g, prob.n());
  AAConfig cfg;
  cfg.depth = static_cast<int>(state.range(0));
  cfg.coeff_bound = 1e4;
  cfg.max_iterations = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(aa_solve(op, w0, cfg));
  }
}
BENCHMARK(BM_AcceleratedEstimate)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

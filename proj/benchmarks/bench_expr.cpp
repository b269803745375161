#include <benchmark/benchmark.h>

#include "solsurf/expr.hpp"
#include "solsurf/scalar_function.hpp"

namespace {

using namespace solsurf;

constexpr const char* kSrc = "sin(v)*exp(cos(v)) + 2*arctan(exp(2*v)) - v^3/(1 + v^2)";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(expr::parse(kSrc));
}
BENCHMARK(BM_Parse);

void BM_Diff(benchmark::State& state) {
  const expr::Expr e = expr::parse(kSrc);
  for (auto _ : state) benchmark::DoNotOptimize(expr::diff(e));
}
BENCHMARK(BM_Diff);

void BM_Eval(benchmark::State& state) {
  const expr::Expr e = expr::parse(kSrc);
  double v = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::eval(e, v));
    v = v > 1.0 ? -1.0 : v + 1e-3;
  }
}
BENCHMARK(BM_Eval);

void BM_ScalarFunctionD2(benchmark::State& state) {
  const ScalarFunction f = ScalarFunction::from_expression(kSrc);
  for (auto _ : state) benchmark::DoNotOptimize(f.d2(0.3));
}
BENCHMARK(BM_ScalarFunctionD2);

}  // namespace

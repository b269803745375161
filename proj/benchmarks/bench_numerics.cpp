#include <cmath>

#include <benchmark/benchmark.h>

#include "solsurf/numerics.hpp"

namespace {

using namespace solsurf::numerics;

void BM_Integrate(benchmark::State& state) {
  auto f = [](double x) { return std::sqrt(std::cosh(x)); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, -2.0, 2.0).value);
}
BENCHMARK(BM_Integrate);

void BM_PrimitiveBuild(benchmark::State& state) {
  auto f = [](double x) { return std::pow(std::cosh(x), -1.5); };
  for (auto _ : state) {
    CumulativePrimitive p(f, -2.0, 2.0, 0.0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(p(1.0));
  }
}
BENCHMARK(BM_PrimitiveBuild)->Arg(64)->Arg(256)->Arg(1024);

void BM_PrimitiveEval(benchmark::State& state) {
  const auto rule = static_cast<PrimitiveRule>(state.range(0));
  CumulativePrimitive p([](double x) { return std::sqrt(std::cosh(x)); }, -2.0, 2.0, 0.0, 256, {},
                        rule);
  double t = -1.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p(t));
    t = t > 1.9 ? -1.9 : t + 0.0137;
  }
}
BENCHMARK(BM_PrimitiveEval)
    ->Arg(static_cast<int>(PrimitiveRule::kHermiteCubic))
    ->Arg(static_cast<int>(PrimitiveRule::kGaussRefinement));

void BM_Rk4(benchmark::State& state) {
  auto f = [](double t, double y) { return -std::tanh(t) * y + std::cos(t); };
  for (auto _ : state) benchmark::DoNotOptimize(ode_rk4(f, 0.0, 1.0, 2.0, 2000).back()[0]);
}
BENCHMARK(BM_Rk4);

}  // namespace

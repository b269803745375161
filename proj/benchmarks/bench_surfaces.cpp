#include <numbers>

#include <benchmark/benchmark.h>

#include "solsurf/families.hpp"
#include "solsurf/surface.hpp"

namespace {

using namespace solsurf;

void BM_JetProp24(benchmark::State& state) {
  const ParamSurface s = surface_prop24(std::numbers::pi / 3);
  JetOptions opts;
  opts.force_fd = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(gauss_curvature(jet(s, 0.3, 0.2, opts)));
}
BENCHMARK(BM_JetProp24)->Arg(0)->Arg(1);

void BM_IntrinsicCurvatureGeneral(benchmark::State& state) {
  const ParamSurface s = surface_general({});
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic_curvature(s, 0.4, 0.1));
}
BENCHMARK(BM_IntrinsicCurvatureGeneral);

void BM_BuildGeneralFamily(benchmark::State& state) {
  for (auto _ : state) {
    GeneralFamily fam({});
    benchmark::DoNotOptimize(fam.gamma2(0.5));
  }
}
BENCHMARK(BM_BuildGeneralFamily);

void BM_VerifyProp24(benchmark::State& state) {
  const ParamSurface s = surface_prop24(std::numbers::pi / 3);
  Expectations e;
  e.theta = std::numbers::pi / 3;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_surface(s, {n, n}, e).passed());
}
BENCHMARK(BM_VerifyProp24)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_VerifyGeneral(benchmark::State& state) {
  const ParamSurface s = surface_general({});
  Expectations e;
  e.theta = std::numbers::pi / 3;
  for (auto _ : state) benchmark::DoNotOptimize(verify_surface(s, {40, 40}, e).passed());
}
BENCHMARK(BM_VerifyGeneral)->Unit(benchmark::kMillisecond);

void BM_FieldEquations(benchmark::State& state) {
  const GeneralFamily fam({});
  for (auto _ : state) {
    benchmark::DoNotOptimize(field_equation_residuals(fam, EvalWindow::of(fam.params().domain)));
  }
}
BENCHMARK(BM_FieldEquations)->Unit(benchmark::kMillisecond);

}  // namespace

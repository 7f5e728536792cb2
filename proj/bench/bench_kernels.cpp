// OpenMP kernels against their serial references.
//
//   dynlap_bench --benchmark_filter=Ulam

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

#include "dynlap/difflimit.hpp"
#include "dynlap/transfer.hpp"

using namespace dynlap;

namespace {

void BM_UlamParallel(benchmark::State& st) {
  const Grid g(standard_map_domain(), static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(0)));
  const FlowMap t = builtin_standard_map();
  for (auto _ : st) benchmark::DoNotOptimize(build_ulam(g, g, t, 20));
  st.counters["threads"] = omp_get_max_threads();
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.size() * 400));
}

void BM_UlamSerial(benchmark::State& st) {
  const Grid g(standard_map_domain(), static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(0)));
  const FlowMap t = builtin_standard_map();
  for (auto _ : st) benchmark::DoNotOptimize(build_ulam_serial(g, g, t, 20));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.size() * 400));
}

ScalarField smooth_field(const Grid& g) {
  return ScalarField::sample(g, [](double x, double y) { return std::sin(2 * x) * std::cos(y); });
}

void BM_SmoothingParallel(benchmark::State& st) {
  const Grid g(standard_map_domain(), static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(0)));
  const SmoothingStencil s = make_stencil(make_kernel(KernelProfile::UniformBall, 0.2), g);
  const ScalarField f = smooth_field(g);
  for (auto _ : st) benchmark::DoNotOptimize(apply_smoothing(s, f));
  st.counters["threads"] = omp_get_max_threads();
}

void BM_SmoothingSerial(benchmark::State& st) {
  const Grid g(standard_map_domain(), static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(0)));
  const SmoothingStencil s = make_stencil(make_kernel(KernelProfile::UniformBall, 0.2), g);
  const ScalarField f = smooth_field(g);
  for (auto _ : st) benchmark::DoNotOptimize(apply_smoothing_serial(s, f));
}

}  // namespace

BENCHMARK(BM_UlamParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UlamSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothingParallel)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothingSerial)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <algorithm>

#include <benchmark/benchmark.h>

#include "graphsys/cgl.hpp"
#include "graphsys/experiment.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/identify.hpp"
#include "graphsys/signal.hpp"
#include "graphsys/spectral.hpp"

namespace {

using namespace graphsys;

CglMatrix er_laplacian(int n) {
  GraphModelSpec spec;
  spec.n = n;
  spec.p = std::min(1.0, 7.0 / n);
  spec.seed = 42;
  return build_cgl(generate_graph(spec));
}

Matrix sampled_covariance(int n, const FilterSpec& filter, int k) {
  return sample_covariance(sample_signals(apply_filter(filter, er_laplacian(n)), k, 7));
}

void BM_EigSym(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix l = er_laplacian(n).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(l));
}
BENCHMARK(BM_EigSym)->Arg(16)->Arg(36)->Arg(64)->Arg(128);

void BM_EstimateCgl(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix s = sampled_covariance(n, {FilterKind::frequency_scaling, 1.0}, 30 * n);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cgl({s, 0.0, std::nullopt}));
}
BENCHMARK(BM_EstimateCgl)->Arg(16)->Arg(36)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_IdentifyExponential(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix s = sampled_covariance(n, {FilterKind::exponential_decay, 0.5}, 30 * n);
  GsiOptions opts;
  opts.filter_kind = FilterKind::exponential_decay;
  for (auto _ : state) benchmark::DoNotOptimize(identify(s, opts));
}
BENCHMARK(BM_IdentifyExponential)->Arg(16)->Arg(36)->Unit(benchmark::kMillisecond);

void BM_IdentifyHop(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix s = sampled_covariance(n, {FilterKind::hop_localized, 2.0}, 30 * n);
  GsiOptions opts;
  opts.filter_kind = FilterKind::hop_localized;
  for (auto _ : state) benchmark::DoNotOptimize(identify(s, opts));
}
BENCHMARK(BM_IdentifyHop)->Arg(16)->Arg(36)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

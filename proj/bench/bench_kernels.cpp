// Serial reference vs OpenMP kernels on training-sized inputs.

#include <benchmark/benchmark.h>

#include "mglab/kernels.hpp"
#include "mglab/mackey_glass.hpp"
#include "mglab/tcrc.hpp"

namespace {

using namespace mglab;

const SeriesFrame& bench_series() {
  static const SeriesFrame s = zscore_apply(make_benchmark(17.0, {0, 2000, 286}, 200),
                                            zscore_fit(make_benchmark(17.0, {0, 2000, 286}, 200)));
  return s;
}

void run_tcrc_elm(benchmark::State& state, kernels::Backend backend) {
  TcrcElmConfig cfg;
  cfg.base.delay = 40;
  cfg.base.layers = 2;
  cfg.expansion_factor = static_cast<std::size_t>(state.range(0));
  const Matrix w_in = tcrc_elm_init(cfg);
  const kernels::WindowMap map = [&](std::span<const double> w, Eigen::Ref<Vector> out) {
    out = tcrc_elm_state(w, cfg, w_in);
  };
  Matrix out(static_cast<Eigen::Index>(tcrc_elm_state_length(cfg)), 2000);
  for (auto _ : state) {
    kernels::collect_windowed(backend, bench_series().values(), 100, cfg.base.delay + 1, map, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void run_noise(benchmark::State& state, kernels::Backend backend) {
  Matrix m = Matrix::Zero(state.range(0), 2000);
  for (auto _ : state) {
    kernels::add_state_noise(backend, m, 1e-3, 7);
    benchmark::DoNotOptimize(m.data());
  }
}

void BM_TcrcElmStates_Serial(benchmark::State& s) { run_tcrc_elm(s, kernels::Backend::Serial); }
void BM_TcrcElmStates_OpenMP(benchmark::State& s) { run_tcrc_elm(s, kernels::Backend::OpenMP); }
void BM_StateNoise_Serial(benchmark::State& s) { run_noise(s, kernels::Backend::Serial); }
void BM_StateNoise_OpenMP(benchmark::State& s) { run_noise(s, kernels::Backend::OpenMP); }

}  // namespace

BENCHMARK(BM_TcrcElmStates_Serial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TcrcElmStates_OpenMP)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StateNoise_Serial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StateNoise_OpenMP)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// Serial reference vs OpenMP kernels. Compare the *_Serial and *_Parallel rows.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "loewner/analysis.hpp"
#include "loewner/beam_model.hpp"
#include "loewner/fem_model.hpp"
#include "loewner/loewner_core.hpp"

using namespace loewner;

namespace {

const beam::BeamParams& params() {
  static const auto p = beam::BeamParams::aluminum_cantilever();
  return p;
}

const analysis::FrequencyGrid& grid() {
  static const auto g = analysis::log_grid(1.0, 4.5, 400);
  return g;
}

Complex h_orig(Complex s) { return beam::eval_H_orig(s, params()); }

const fem::SecondOrderSystem& fem1000() {
  static const auto sys = fem::assemble_second_order(1000, params());
  return sys;
}

Complex h_fem(Complex s) { return fem::eval_H_fem(s, fem1000(), params()); }

const TangentialData& beam_data() {
  static const auto d =
      close_under_conjugation(partition_samples(analysis::sample_serial(h_orig, grid())));
  return d;
}

void threads_counter(benchmark::State& state) {
  state.counters["threads"] = omp_get_max_threads();
}

void BM_SampleOrig_Serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(analysis::sample_serial(h_orig, grid()));
}
void BM_SampleOrig_Parallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(analysis::sample(h_orig, grid()));
  threads_counter(state);
}

void BM_SampleFem1000_Serial(benchmark::State& state) {
  fem1000();
  for (auto _ : state) benchmark::DoNotOptimize(analysis::sample_serial(h_fem, grid()));
}
void BM_SampleFem1000_Parallel(benchmark::State& state) {
  fem1000();
  for (auto _ : state) benchmark::DoNotOptimize(analysis::sample(h_fem, grid()));
  threads_counter(state);
}

void BM_BuildPencil_Serial(benchmark::State& state) {
  beam_data();
  for (auto _ : state) benchmark::DoNotOptimize(build_pencil_serial(beam_data()));
}
void BM_BuildPencil_Parallel(benchmark::State& state) {
  beam_data();
  for (auto _ : state) benchmark::DoNotOptimize(build_pencil(beam_data()));
  threads_counter(state);
}

}  // namespace

BENCHMARK(BM_SampleOrig_Serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleOrig_Parallel)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_SampleFem1000_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleFem1000_Parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildPencil_Serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BuildPencil_Parallel)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();

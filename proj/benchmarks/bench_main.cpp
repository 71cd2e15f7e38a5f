// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "sonosynth/metrics.hpp"
#include "sonosynth/phantom.hpp"
#include "sonosynth/pipeline.hpp"
#include "sonosynth/rf.hpp"

using namespace sonosynth;

namespace {

ScattererField field_for(double thickness_mm) {
  PhantomSpec spec;
  spec.extent.elevation_thickness_mm = thickness_mm;
  spec.seed = 1;
  return place_scatterers(spec);
}

void BM_PlaceScatterers(benchmark::State& state) {
  PhantomSpec spec;
  for (auto _ : state) {
    spec.seed++;
    benchmark::DoNotOptimize(place_scatterers(spec));
  }
}
BENCHMARK(BM_PlaceScatterers)->Unit(benchmark::kMillisecond);

// Arg: elevation slab thickness in mm.
void BM_SynthesizeRf(benchmark::State& state) {
  const auto field = field_for(static_cast<double>(state.range(0)));
  const TransducerConfig t;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_rf(field, t));
  state.counters["scatterers"] = static_cast<double>(field.size());
}
BENCHMARK(BM_SynthesizeRf)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DetectEnvelope(benchmark::State& state) {
  const auto rf = synthesize_rf(field_for(2.0), TransducerConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(detect_envelope(rf));
}
BENCHMARK(BM_DetectEnvelope)->Unit(benchmark::kMillisecond);

void BM_ImageChain(benchmark::State& state) {
  const auto rf = synthesize_rf(field_for(2.0), TransducerConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(run_image_chain(rf, PipelineConfig{}, "bench"));
}
BENCHMARK(BM_ImageChain)->Unit(benchmark::kMillisecond);

void BM_ScoreImage(benchmark::State& state) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(0, 2);
  LabelGrid a(388, 388), b(388, 388);
  for (auto& v : a.values()) v = static_cast<std::uint8_t>(d(rng));
  for (auto& v : b.values()) v = static_cast<std::uint8_t>(d(rng));
  for (auto _ : state) benchmark::DoNotOptimize(score_image("x", a, b));
}
BENCHMARK(BM_ScoreImage);

}  // namespace
BENCHMARK_MAIN();

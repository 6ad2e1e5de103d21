#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bloodflow/compositor.hpp"
#include "bloodflow/ippg.hpp"
#include "bloodflow/mask.hpp"
#include "bloodflow/pulse.hpp"

using namespace bloodflow;

namespace {

FrameBuffer noisy_frame(std::size_t w, std::size_t h) {
  std::mt19937 rng(5);
  std::normal_distribution<double> n(0.6, 0.02);
  std::vector<double> p[3];
  for (auto& v : p) {
    v.resize(w * h);
    for (double& s : v) s = clamp01(n(rng));
  }
  return FrameBuffer(w, h, p[0], p[1], p[2]);
}

void BM_AugmentFrame(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto frame = noisy_frame(side, side);
  const auto mask = PerfusionMask::filled(side, side, 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(augment_frame(frame, mask, 0.3, 0.15, ColorWeights::physio()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_AugmentFrame)->Arg(64)->Arg(256)->Arg(640);

void BM_SegmentSkin(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto frame = noisy_frame(side, side);
  const FaceRoi roi{side / 8, side / 8, side * 3 / 4, side * 3 / 4};
  for (auto _ : state) benchmark::DoNotOptimize(segment_skin(frame, roi));
}
BENCHMARK(BM_SegmentSkin)->Arg(64)->Arg(256)->Arg(640);

void BM_Bandpass(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(9);
  std::normal_distribution<double> noise;
  std::vector<double> x(n);
  for (double& v : x) v = noise(rng);
  for (auto _ : state) benchmark::DoNotOptimize(bandpass(x, 30.0));
}
BENCHMARK(BM_Bandpass)->Arg(300)->Arg(1800)->Arg(18000);

void BM_Verify(benchmark::State& state) {
  const auto face = noisy_frame(64, 64);
  const auto ones = PerfusionMask::filled(64, 64, 1.0);
  AnimationConfig cfg;
  cfg.bpm = 90;
  const auto video = animate(face, std::span(&ones, 1), synth_physio(90, 30, 10), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(verify(video, ones));
}
BENCHMARK(BM_Verify);

}  // namespace

BENCHMARK_MAIN();

// Serial reference vs OpenMP batch descriptor extraction over a full window
// sweep. Thread count follows GAZE_DYN_THREADS.

#include <benchmark/benchmark.h>

#include "gazedyn/kernels.hpp"
#include "gazedyn/synth.hpp"

namespace {

using namespace gazedyn;

struct Fixture {
  Scanpath drive;
  std::vector<FrameSpan> windows;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    synth::CorpusSpec spec;
    spec.drivers = {{"bench", 20, 20, 40}};
    Corpus corpus = synth::generate_corpus(spec);
    synth::apply_noise(corpus, synth::NoiseChannel::default_channel(), 7);
    Fixture out{corpus.front().estimated, {}};
    const std::size_t width = 150;
    for (std::size_t end = width; end <= out.drive.size(); end += 1) out.windows.push_back({end - width, end});
    return out;
  }();
  return f;
}

FeatureConfig config_for(int mode) {
  FeatureConfig c;
  c.mode = static_cast<FeatureMode>(mode);
  return c;
}

void BM_ExtractSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  const FeatureConfig c = config_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::extract_serial(f.drive, f.windows, c));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * f.windows.size()));
}

void BM_ExtractParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  const FeatureConfig c = config_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::extract_parallel(f.drive, f.windows, c));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * f.windows.size()));
}

}  // namespace

BENCHMARK(BM_ExtractSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

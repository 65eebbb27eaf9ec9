#include <benchmark/benchmark.h>

#include "hgr/features.hpp"
#include "hgr/network.hpp"
#include "hgr/synth.hpp"

namespace {

const std::vector<hgr::SkeletonSequence>& sequences() {
  static const auto data = [] {
    hgr::SynthOptions options;
    options.subjects = 2;
    options.trials = 3;
    return hgr::generate_dataset(hgr::builtin_scripts(), options);
  }();
  return data;
}

const hgr::FeatureOptions kOptions;

void BM_ExtractSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(hgr::extract_all_serial(sequences(), kOptions));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(sequences().size()));
}

void BM_ExtractParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(hgr::extract_all(sequences(), kOptions));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(sequences().size()));
}

struct GradientFixture {
  hgr::nn::NetworkModel model;
  hgr::nn::Batch batch;

  GradientFixture() {
    const auto streams = hgr::extract_all(sequences(), kOptions);
    std::vector<hgr::nn::Sample> samples;
    for (std::size_t i = 0; i < 16 && i < streams.size(); ++i) {
      samples.push_back(hgr::nn::make_sample(streams[i], static_cast<int>(i % 6)));
    }
    hgr::nn::NetworkConfig config;
    const auto dims = kOptions.dims();
    for (std::size_t k = 0; k < hgr::kBranchCount; ++k) {
      config.branches[k].input_dim = dims[k];
      config.branches[k].lstm_hidden = 32;
      config.branches[k].fc_out = 32;
    }
    config.head_hidden = {64, 32};
    config.classes = 6;
    model = hgr::nn::init_model(config, 7);
    hgr::nn::fit_standardizers(model, samples);
    batch = hgr::nn::make_batch(model, samples);
  }
};

const GradientFixture& fixture() {
  static const GradientFixture f;
  return f;
}

void BM_GradientsSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hgr::nn::batch_gradients_serial(f.model, f.batch, true, 3));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.batch.size()));
}

void BM_GradientsParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hgr::nn::batch_gradients(f.model, f.batch, true, 3));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.batch.size()));
}

}  // namespace

BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientsParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

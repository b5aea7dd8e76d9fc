#include <benchmark/benchmark.h>

#include "synthetic.hpp"
#include "wsd/ensemble.hpp"
#include "wsd/features.hpp"
#include "wsd/naive_bayes.hpp"

namespace {

const wsd::Corpus& line_corpus() {
  static const wsd::Corpus corpus = wsd::synth::generate(wsd::synth::line_like(7));
  return corpus;
}

void BM_Extract(benchmark::State& state) {
  const auto& corpus = line_corpus();
  const wsd::WindowSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsd::extract(corpus[i++ % corpus.size()], spec));
  }
}
BENCHMARK(BM_Extract)->Arg(1)->Arg(5)->Arg(50);

void BM_Train(benchmark::State& state) {
  const auto& corpus = line_corpus();
  const wsd::WindowSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsd::NaiveBayesModel::train(corpus, spec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(corpus.size()));
}
BENCHMARK(BM_Train)->Arg(0)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto& corpus = line_corpus();
  const wsd::WindowSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const auto model = wsd::NaiveBayesModel::train(corpus, spec);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.classify_index(corpus[i++ % corpus.size()]));
  }
}
BENCHMARK(BM_Classify)->Arg(1)->Arg(5)->Arg(50);

void BM_TrainGrid(benchmark::State& state) {
  const auto& corpus = line_corpus();
  std::vector<std::size_t> train;
  std::vector<std::size_t> devtest;
  for (std::size_t i = 0; i < corpus.size(); ++i) (i % 10 == 0 ? devtest : train).push_back(i);
  const auto train_split = corpus.subset(train);
  const auto devtest_split = corpus.subset(devtest);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsd::train_grid(train_split, devtest_split, {}));
  }
}
BENCHMARK(BM_TrainGrid)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "settag/baseline.hpp"
#include "settag/hmm.hpp"
#include "settag/memm.hpp"
#include "settag/setpred.hpp"
#include "settag/levenshtein.hpp"

namespace {

using namespace settag;

const Corpus& corpus() {
  static const Corpus c = [] {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(SETTAG_DATA_DIR) / "corpus")) {
      if (e.path().extension() == ".tsv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return load_corpus(files);
  }();
  return c;
}

void BM_Ubop(benchmark::State& state) {
  const auto s = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> expo(1.0);
  std::vector<Posterior> posts(256);
  for (auto& p : posts) {
    std::vector<double> w(s);
    for (auto& x : w) x = expo(rng);
    p = normalize(w);
  }
  const UtilityConfig cfg(1.0, s);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ubop(posts[i++ % posts.size()], cfg));
}
BENCHMARK(BM_Ubop)->Arg(10)->Arg(50)->Arg(300);

void BM_Levenshtein(benchmark::State& state) {
  const std::string a = "vnderscheydenheyt", b = "underscheidenheit";
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein);

template <class Model>
void run_posteriors(benchmark::State& state, const Model& model) {
  const auto& doc = corpus().documents.front();
  for (auto _ : state) benchmark::DoNotOptimize(model.posteriors(doc));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}

void BM_BaselinePosteriors(benchmark::State& state) {
  static const auto model = BaselineModel::train(corpus().documents, corpus().tagset);
  run_posteriors(state, model);
}
BENCHMARK(BM_BaselinePosteriors)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  static const auto model = HmmModel::train(corpus().documents, corpus().tagset);
  run_posteriors(state, model);
}
BENCHMARK(BM_ForwardBackward)->Unit(benchmark::kMillisecond);

void BM_MemmPosteriors(benchmark::State& state) {
  static const auto model = [] {
    MemmOptions o;
    o.iterations = 50;
    return MemmModel::train(corpus().documents, corpus().tagset, o);
  }();
  run_posteriors(state, model);
}
BENCHMARK(BM_MemmPosteriors)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "support/generators.hpp"
#include "vlmkit/layout.hpp"

static void BM_ReadingOrderGrid(benchmark::State& state) {
  vlmkit::testing::Rng rng(2);
  std::vector<vlmkit::OcrWord> words;
  while (words.size() < static_cast<std::size_t>(state.range(0))) {
    const auto page = vlmkit::testing::jittered_grid_page(rng);
    words.insert(words.end(), page.shuffled.begin(), page.shuffled.end());
  }
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::reading_order(words));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_ReadingOrderGrid)->Arg(100)->Arg(1000)->Arg(10000);

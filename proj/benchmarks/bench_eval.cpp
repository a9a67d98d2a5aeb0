#include <benchmark/benchmark.h>

#include "support/generators.hpp"
#include "vlmkit/eval.hpp"

static void BM_MatchBoxes(benchmark::State& state) {
  vlmkit::testing::Rng rng(3);
  std::vector<vlmkit::BBox> gt, pred;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    const double x = vlmkit::testing::uniform(rng, 0.0, 0.9), y = vlmkit::testing::uniform(rng, 0.0, 0.95);
    gt.push_back({x, y, x + 0.1, y + 0.05});
    pred.push_back({x + 0.01, y, x + 0.11, y + 0.05});
  }
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::match_boxes(pred, gt));
}
BENCHMARK(BM_MatchBoxes)->Arg(8)->Arg(128)->Arg(1024);

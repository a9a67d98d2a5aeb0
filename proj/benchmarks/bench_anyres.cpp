#include <benchmark/benchmark.h>

#include "vlmkit/anyres.hpp"

static void BM_SelectGrid(benchmark::State& state) {
  const auto profile = state.range(0) == 0 ? vlmkit::profiles::stage3() : vlmkit::profiles::extrapolation();
  int w = 1;
  for (auto _ : state) {
    w = w % 5000 + 37;
    benchmark::DoNotOptimize(vlmkit::select_grid(w, 6000 - w, profile));
  }
}
BENCHMARK(BM_SelectGrid)->Arg(0)->Arg(1);

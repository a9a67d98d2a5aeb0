#include <benchmark/benchmark.h>

#include <random>

#include "vlmkit/merge.hpp"

namespace {

std::vector<vlmkit::TensorMap> checkpoints(std::size_t k, std::uint64_t elements) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<vlmkit::TensorMap> maps(k);
  for (auto& m : maps) {
    for (int t = 0; t < 8; ++t) {
      auto& tensor = m["layer." + std::to_string(t)];
      tensor.shape = {elements / 8};
      tensor.data.resize(elements / 8);
      for (auto& v : tensor.data) v = dist(rng);
    }
  }
  return maps;
}

void BM_Average(benchmark::State& state) {
  const auto maps = checkpoints(4, 1'000'000);
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::average(maps, jobs));
  state.SetItemsProcessed(state.iterations() * 4'000'000);
}
BENCHMARK(BM_Average)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Cosine(benchmark::State& state) {
  auto maps = checkpoints(5, 1'000'000);
  const auto base = maps.back();
  maps.pop_back();
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::cosine_matrix(maps, base));
}
BENCHMARK(BM_Cosine)->Unit(benchmark::kMillisecond);

void BM_ContainerRoundTrip(benchmark::State& state) {
  const auto map = checkpoints(1, 1'000'000).front();
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::decode_container(vlmkit::encode_container(map)));
}
BENCHMARK(BM_ContainerRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

#include <benchmark/benchmark.h>

#include "support/generators.hpp"
#include "vlmkit/grammar.hpp"

namespace {

std::string ocr_page(std::size_t words) {
  vlmkit::testing::Rng rng(1);
  vlmkit::OutputDoc doc;
  doc.mode = vlmkit::DocMode::ocr;
  for (std::size_t i = 0; i < words; ++i) {
    doc.segments.emplace_back(vlmkit::OcrWord{vlmkit::testing::random_string(rng, false), vlmkit::testing::random_box(rng)});
  }
  return vlmkit::serialize(doc);
}

void BM_ParseOcr(benchmark::State& state) {
  const auto text = ocr_page(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::parse_ocr(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseOcr)->Arg(16)->Arg(256)->Arg(4096);

void BM_Serialize(benchmark::State& state) {
  const auto doc = vlmkit::parse_ocr(ocr_page(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(vlmkit::serialize(doc));
}
BENCHMARK(BM_Serialize)->Arg(256)->Arg(4096);

}  // namespace

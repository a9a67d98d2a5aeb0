#include "vlmkit/budget.hpp"

#include "vlmkit/anyres.hpp"
#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(Errc::InvalidSpec, "logit memory estimate overflows 64 bits");
  return out;
}

}  // namespace

void validate(const LogitSpec& spec) {
  if (spec.batch == 0 || spec.seq_len == 0 || spec.vocab == 0 || spec.bytes_per_element == 0) {
    throw Error(Errc::InvalidSpec, "batch, seq_len, vocab and bytes_per_element must be positive");
  }
  if (spec.chunk_len > spec.seq_len) throw Error(Errc::InvalidSpec, "chunk_len exceeds seq_len");
}

std::uint64_t logit_memory(const LogitSpec& spec) {
  validate(spec);
  const auto rows = spec.chunk_len == 0 ? spec.seq_len : spec.chunk_len;
  return checked_mul(checked_mul(checked_mul(spec.batch, rows), spec.vocab), spec.bytes_per_element);
}

double dpo_peak_factor(const LogitSpec& spec, bool reference_resident) {
  validate(spec);
  return reference_resident ? 2.0 : 1.0;
}

std::vector<StageBudget> budget_table(std::uint64_t batch, std::uint64_t vocab, std::uint64_t bytes_per_element,
                                      std::uint64_t chunk_len, bool reference_resident) {
  std::vector<StageBudget> rows;
  for (const auto& stage : profiles::training_stages()) {
    LogitSpec spec{batch, static_cast<std::uint64_t>(stage.context_length), vocab, bytes_per_element, 0};
    StageBudget row;
    row.stage = stage.name;
    row.seq_len = spec.seq_len;
    row.unchunked_bytes = logit_memory(spec);
    spec.chunk_len = chunk_len == 0 ? 0 : std::min(chunk_len, spec.seq_len);
    row.chunk_len = spec.chunk_len == 0 ? spec.seq_len : spec.chunk_len;
    row.chunked_bytes = logit_memory(spec);
    row.reduction = static_cast<double>(row.unchunked_bytes) / static_cast<double>(row.chunked_bytes);
    row.dpo_factor = dpo_peak_factor(spec, reference_resident);
    row.dpo_peak_bytes = checked_mul(row.chunked_bytes, reference_resident ? 2 : 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace vlmkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vlmkit {

/// Vocabulary size of the reference language model (about 150K entries).
inline constexpr std::uint64_t kDefaultVocab = 150000;
inline constexpr std::uint64_t kDefaultBytesPerElement = 2;

struct LogitSpec {
  std::uint64_t batch = 1;
  std::uint64_t seq_len = 0;
  std::uint64_t vocab = kDefaultVocab;
  std::uint64_t bytes_per_element = kDefaultBytesPerElement;
  std::uint64_t chunk_len = 0;  // 0 = unchunked
};

/// Throws Errc::InvalidSpec unless every field is positive (chunk_len may be
/// 0) and chunk_len <= seq_len.
void validate(const LogitSpec& spec);

/// Bytes held by the peak logit tensor: batch x (chunk_len or seq_len) x vocab
/// x bytes_per_element. Hidden states and gradients are not counted. Throws
/// Errc::InvalidSpec on overflow.
std::uint64_t logit_memory(const LogitSpec& spec);

/// 2 when the frozen reference model's logits are resident next to the
/// target's during preference optimization, else 1.
double dpo_peak_factor(const LogitSpec& spec, bool reference_resident);

struct StageBudget {
  std::string stage;
  std::uint64_t seq_len = 0;
  std::uint64_t chunk_len = 0;  // effective, clamped to seq_len
  std::uint64_t unchunked_bytes = 0;
  std::uint64_t chunked_bytes = 0;
  double reduction = 1.0;  // unchunked / chunked
  double dpo_factor = 1.0;
  std::uint64_t dpo_peak_bytes = 0;  // chunked_bytes x dpo_factor
};

/// One row per training stage, seq_len taken from the stage context length.
/// `chunk_len` of 0 leaves every stage unchunked.
std::vector<StageBudget> budget_table(std::uint64_t batch, std::uint64_t vocab,
                                      std::uint64_t bytes_per_element, std::uint64_t chunk_len,
                                      bool reference_resident);

}  // namespace vlmkit

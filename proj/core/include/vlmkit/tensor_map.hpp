#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vlmkit {

struct Tensor {
  std::vector<std::uint64_t> shape;  // empty shape is a scalar
  std::vector<float> data;           // row-major

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

std::uint64_t element_count(std::span<const std::uint64_t> shape);

/// Named float tensors, iterated in lexicographic name order.
using TensorMap = std::map<std::string, Tensor>;

// Container layout, all integers little-endian:
//   "VVTM" | u32 version (=1) | u64 header length | JSON header | payload
// The header maps each name to {"offset": bytes, "shape": [...]}, keys sorted.
// The payload is every tensor's float32 data, contiguous in name order.
inline constexpr char kContainerMagic[4] = {'V', 'V', 'T', 'M'};
inline constexpr std::uint32_t kContainerVersion = 1;

/// Throws Errc::InvalidInput if a tensor's data length disagrees with its shape.
std::vector<std::uint8_t> encode_container(const TensorMap& map);

/// Throws Errc::MalformedContainer on any structural problem: bad magic,
/// unknown version, truncated header or payload, non-contiguous offsets.
TensorMap decode_container(std::span<const std::uint8_t> bytes);

TensorMap read_container(const std::filesystem::path& path);
void write_container(const std::filesystem::path& path, const TensorMap& map);

}  // namespace vlmkit

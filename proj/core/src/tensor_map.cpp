#include "vlmkit/tensor_map.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "json_shim.hpp"
#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

using detail::Json;

constexpr std::size_t kPreambleSize = 4 + 4 + 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(p[i]) << (8 * i);
  return value;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::MalformedContainer, what);
}

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

}  // namespace

std::uint64_t element_count(std::span<const std::uint64_t> shape) {
  std::uint64_t n = 1;
  for (auto d : shape) {
    if (mul_overflows(n, d, n)) throw Error(Errc::InvalidInput, "tensor shape overflows");
  }
  return n;
}

std::vector<std::uint8_t> encode_container(const TensorMap& map) {
  Json header = Json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : map) {
    if (element_count(tensor.shape) != tensor.data.size()) {
      throw Error(Errc::InvalidInput, "tensor '" + name + "' data length disagrees with its shape");
    }
    header[name] = {{"shape", tensor.shape}, {"offset", offset}};
    offset += tensor.data.size() * sizeof(float);
  }
  const std::string text = detail::dump(header, -1);

  std::vector<std::uint8_t> out;
  out.reserve(kPreambleSize + text.size() + offset);
  out.insert(out.end(), std::begin(kContainerMagic), std::end(kContainerMagic));
  put_le<std::uint32_t>(out, kContainerVersion);
  put_le<std::uint64_t>(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& [name, tensor] : map) {
    for (float f : tensor.data) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

TensorMap decode_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreambleSize) malformed("file shorter than the container preamble");
  if (std::memcmp(bytes.data(), kContainerMagic, 4) != 0) malformed("bad magic, expected VVTM");
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kContainerVersion) malformed("unsupported container version " + std::to_string(version));
  const auto header_len = get_le<std::uint64_t>(bytes.data() + 8);
  if (header_len > bytes.size() - kPreambleSize) malformed("header length exceeds file size");

  const auto* header_begin = reinterpret_cast<const char*>(bytes.data() + kPreambleSize);
  Json header = Json::parse(header_begin, header_begin + header_len, nullptr, false);
  if (header.is_discarded() || !header.is_object()) malformed("header is not a JSON object");

  const auto payload = bytes.subspan(kPreambleSize + header_len);
  TensorMap map;
  std::uint64_t expected_offset = 0;
  for (const auto& [name, entry] : header.items()) {
    if (!entry.is_object()) malformed("entry '" + name + "' is not an object");
    auto shape_it = entry.find("shape");
    auto offset_it = entry.find("offset");
    if (shape_it == entry.end() || !shape_it->is_array() || offset_it == entry.end() ||
        !offset_it->is_number_unsigned()) {
      malformed("entry '" + name + "' needs 'shape' and 'offset'");
    }
    Tensor tensor;
    for (const auto& d : *shape_it) {
      if (!d.is_number_unsigned()) malformed("entry '" + name + "' has a non-integer dimension");
      tensor.shape.push_back(d.get<std::uint64_t>());
    }
    if (offset_it->get<std::uint64_t>() != expected_offset) {
      malformed("entry '" + name + "' is not contiguous with the previous tensor");
    }
    std::uint64_t count = 0;
    std::uint64_t nbytes = 0;
    try {
      count = element_count(tensor.shape);
    } catch (const Error&) {
      malformed("entry '" + name + "' shape overflows");
    }
    if (mul_overflows(count, sizeof(float), nbytes) || nbytes > payload.size() - expected_offset) {
      malformed("payload too short for entry '" + name + "'");
    }
    tensor.data.resize(count);
    const auto* src = payload.data() + expected_offset;
    for (std::uint64_t i = 0; i < count; ++i) {
      tensor.data[i] = std::bit_cast<float>(get_le<std::uint32_t>(src + 4 * i));
    }
    expected_offset += nbytes;
    map.emplace(name, std::move(tensor));
  }
  if (expected_offset != payload.size()) malformed("payload has trailing bytes");
  return map;
}

TensorMap read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoError, "cannot read " + path.string());
  return decode_container(bytes);
}

void write_container(const std::filesystem::path& path, const TensorMap& map) {
  const auto bytes = encode_container(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

}  // namespace vlmkit

#include "vlmkit/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace vlmkit::text {
namespace {

struct CodePoint {
  UChar32 value;   // negative for an invalid sequence
  std::size_t end; // byte offset just past the sequence
};

CodePoint next_code_point(std::string_view s, std::size_t i) {
  int32_t pos = static_cast<int32_t>(i);
  const auto len = static_cast<int32_t>(s.size());
  UChar32 c = 0;
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos, len, c);
  return {c, static_cast<std::size_t>(pos)};
}

bool is_space(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }

}  // namespace

bool is_blank(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    auto cp = next_code_point(s, i);
    if (!is_space(cp.value)) return false;
    i = cp.end;
  }
  return true;
}

bool contains_whitespace(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    auto cp = next_code_point(s, i);
    if (is_space(cp.value)) return true;
    i = cp.end;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  std::size_t first = s.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < s.size();) {
    auto cp = next_code_point(s, i);
    if (!is_space(cp.value)) {
      if (first == s.size()) first = i;
      last = cp.end;
    }
    i = cp.end;
  }
  if (first == s.size()) return s.substr(s.size());
  return s.substr(first, last - first);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = std::string_view::npos;
  for (std::size_t i = 0; i < s.size();) {
    auto cp = next_code_point(s, i);
    if (is_space(cp.value)) {
      if (start != std::string_view::npos) {
        parts.push_back(s.substr(start, i - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = i;
    }
    i = cp.end;
  }
  if (start != std::string_view::npos) parts.push_back(s.substr(start));
  return parts;
}

std::size_t count_code_points(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++n) i = next_code_point(s, i).end;
  return n;
}

std::string normalize(std::string_view s, bool case_fold) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  auto ustr = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  if (case_fold) {
    // Folding can decompose (e.g. U+1E9E), so compose afterwards.
    ustr.foldCase(U_FOLD_CASE_DEFAULT);
  }
  icu::UnicodeString composed = nfc->normalize(ustr, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");

  std::string out;
  composed.toUTF8String(out);
  return std::string(trim(out));
}

}  // namespace vlmkit::text

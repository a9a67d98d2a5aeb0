#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vlmkit/bbox.hpp"

namespace vlmkit {

// Special tokens of the response grammar.
inline constexpr std::string_view kObjOpen = "<obj>";
inline constexpr std::string_view kObjClose = "</obj>";
inline constexpr std::string_view kBBoxOpen = "<bbox>";
inline constexpr std::string_view kBBoxClose = "</bbox>";
inline constexpr std::string_view kCharOpen = "<char>";
inline constexpr std::string_view kCharClose = "</char>";
inline constexpr std::string_view kGroundingMarker = "<gro>";

enum class DocMode { grounding, ocr };

struct FreeText {
  std::string text;
  friend bool operator==(const FreeText&, const FreeText&) = default;
};

/// `<obj>{object}</obj>` optionally followed by `<bbox>...</bbox>`.
struct GroundedSpan {
  std::string object_text;
  std::optional<BBox> bbox;
  friend bool operator==(const GroundedSpan&, const GroundedSpan&) = default;
};

/// `<char>{word}</char><bbox>...</bbox>`; the word never contains whitespace.
struct OcrWord {
  std::string text;
  BBox bbox;
  friend bool operator==(const OcrWord&, const OcrWord&) = default;
};

using Segment = std::variant<FreeText, GroundedSpan, OcrWord>;

struct ParseWarning {
  std::size_t offset = 0;  // byte offset into the parsed text
  std::string message;
};

/// One parsed model response.
///
/// Equality compares mode and segments only; `query_marker` and `warnings`
/// are parse metadata.
struct OutputDoc {
  DocMode mode = DocMode::grounding;
  std::vector<Segment> segments;
  bool query_marker = false;  // a leading <gro> was consumed
  std::vector<ParseWarning> warnings;

  friend bool operator==(const OutputDoc& a, const OutputDoc& b) {
    return a.mode == b.mode && a.segments == b.segments;
  }
};

struct ParseOptions {
  /// Strict rejects out-of-range and inverted boxes, whitespace inside OCR
  /// words and stray text in OCR responses. Lenient repairs them and records
  /// a warning for each repair.
  bool strict = true;
  /// Serializer precision for coordinates; must be in [1, 17].
  int max_fraction_digits = 3;
};

/// Parses a grounding/referring response: free text interleaved with
/// `<obj>` spans. A leading `<gro>` is consumed and sets `query_marker`.
/// Angle-bracket tokens outside the grammar stay literal text.
/// Throws vlmkit::Error on malformed input.
OutputDoc parse_grounding(std::string_view text, const ParseOptions& opts = {});

/// Parses an `<ocr>` response into Word segments. Whitespace between spans
/// is ignored.
OutputDoc parse_ocr(std::string_view text, const ParseOptions& opts = {});

/// Emits the canonical token form of `doc`. Throws Errc::InvalidDoc if the
/// document cannot be written so that it parses back to itself.
std::string serialize(const OutputDoc& doc, const ParseOptions& opts = {});

/// Throws Errc::InvalidDoc describing the first invariant `doc` violates.
void validate(const OutputDoc& doc);

/// Decimal rendering used by the serializer: at most `digits` fractional
/// digits, round-half-even on the exact binary value, trailing zeros trimmed.
std::string format_coordinate(double value, int digits);

/// The value a coordinate takes after one serialize/parse cycle.
double round_coordinate(double value, int digits);

}  // namespace vlmkit

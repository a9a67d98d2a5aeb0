#include "vlmkit/grammar.hpp"

#include <array>
#include <charconv>
#include <string>

#include "vlmkit/error.hpp"
#include "vlmkit/text.hpp"

namespace vlmkit {
namespace {

constexpr std::array<std::string_view, 7> kReservedTags = {
    kObjOpen, kObjClose, kBBoxOpen, kBBoxClose, kCharOpen, kCharClose, kGroundingMarker};

constexpr int kMaxFractionDigits = 17;

std::string_view reserved_at(std::string_view s, std::size_t pos) {
  for (auto tag : kReservedTags) {
    if (s.substr(pos, tag.size()) == tag) return tag;
  }
  return {};
}

std::size_t find_reserved(std::string_view s, std::size_t from) {
  for (auto pos = s.find('<', from); pos != std::string_view::npos; pos = s.find('<', pos + 1)) {
    if (!reserved_at(s, pos).empty()) return pos;
  }
  return std::string_view::npos;
}

bool contains_reserved(std::string_view s) { return find_reserved(s, 0) != std::string_view::npos; }

[[noreturn]] void fail(Errc code, std::size_t offset, const std::string& what) {
  throw Error(code, what + " at byte " + std::to_string(offset));
}

[[noreturn]] void invalid_doc(std::size_t index, const std::string& what) {
  throw Error(Errc::InvalidDoc, "segment " + std::to_string(index) + ": " + what);
}

// [+-]? (digits ('.' digits*)? | '.' digits)
bool parse_number(std::string_view s, double& out) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  const std::size_t body = i;
  std::size_t digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
  }
  if (digits == 0 || i != s.size()) return false;

  double value = 0.0;
  auto [end, ec] = std::from_chars(s.data() + body, s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) return false;
  out = (negative ? -value : value) + 0.0;  // canonical +0
  return true;
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts, DocMode mode) : src_(src), opts_(opts) {
    doc_.mode = mode;
  }

  OutputDoc grounding() {
    if (src_.starts_with(kGroundingMarker)) {
      doc_.query_marker = true;
      pos_ = kGroundingMarker.size();
    }
    std::string pending;
    auto flush = [&] {
      if (!pending.empty()) doc_.segments.emplace_back(FreeText{std::move(pending)});
      pending.clear();
    };
    while (pos_ < src_.size()) {
      const auto next = find_reserved(src_, pos_);
      if (next == std::string_view::npos) {
        pending.append(src_.substr(pos_));
        break;
      }
      pending.append(src_.substr(pos_, next - pos_));
      pos_ = next;
      const auto tag = reserved_at(src_, pos_);
      if (tag == kObjOpen) {
        flush();
        parse_object();
      } else if (tag == kGroundingMarker && !opts_.strict) {
        warn(pos_, "stray <gro> dropped");
        pos_ += tag.size();
      } else {
        fail(Errc::UnexpectedTag, pos_, "unexpected " + std::string(tag) + " in grounding response");
      }
    }
    flush();
    return std::move(doc_);
  }

  OutputDoc ocr() {
    while (pos_ < src_.size()) {
      const auto next = find_reserved(src_, pos_);
      const auto gap_end = next == std::string_view::npos ? src_.size() : next;
      if (!text::is_blank(src_.substr(pos_, gap_end - pos_))) {
        if (opts_.strict) fail(Errc::UnexpectedText, pos_, "free text in OCR response");
        warn(pos_, "free text in OCR response dropped");
      }
      if (next == std::string_view::npos) break;
      pos_ = next;
      const auto tag = reserved_at(src_, pos_);
      if (tag != kCharOpen) {
        fail(Errc::UnexpectedTag, pos_, "unexpected " + std::string(tag) + " in OCR response");
      }
      parse_word();
    }
    return std::move(doc_);
  }

 private:
  void warn(std::size_t offset, std::string message) {
    doc_.warnings.push_back({offset, std::move(message)});
  }

  // Extracts the payload of `open ... close` starting at pos_ and moves past it.
  std::string_view take_payload(std::string_view open, std::string_view close) {
    const auto start = pos_;
    const auto body = pos_ + open.size();
    const auto end = src_.find(close, body);
    if (end == std::string_view::npos) {
      fail(Errc::UnclosedTag, start, std::string(open) + " without " + std::string(close));
    }
    const auto payload = src_.substr(body, end - body);
    if (const auto inner = find_reserved(payload, 0); inner != std::string_view::npos) {
      fail(Errc::UnexpectedTag, body + inner,
           std::string(reserved_at(payload, inner)) + " inside " + std::string(open));
    }
    pos_ = end + close.size();
    return payload;
  }

  // pos_ is just past a closing </obj> or </char>. Returns true when a
  // <bbox> follows; lenient mode tolerates whitespace in between.
  bool at_bbox() {
    if (src_.substr(pos_).starts_with(kBBoxOpen)) return true;
    if (opts_.strict) return false;
    const auto next = find_reserved(src_, pos_);
    if (next == std::string_view::npos || reserved_at(src_, next) != kBBoxOpen) return false;
    if (!text::is_blank(src_.substr(pos_, next - pos_))) return false;
    warn(pos_, "whitespace before <bbox> ignored");
    pos_ = next;
    return true;
  }

  BBox parse_bbox() {
    const auto start = pos_;
    const auto payload = take_payload(kBBoxOpen, kBBoxClose);
    const auto body = start + kBBoxOpen.size();

    std::array<std::string_view, 4> fields;
    std::size_t arity = 0;
    if (!text::is_blank(payload)) {
      std::size_t from = 0;
      while (true) {
        const auto comma = payload.find(',', from);
        const auto field = payload.substr(from, comma == std::string_view::npos ? comma : comma - from);
        if (arity < fields.size()) fields[arity] = field;
        ++arity;
        if (comma == std::string_view::npos) break;
        from = comma + 1;
      }
    }
    if (arity != 4) {
      fail(Errc::BadBBoxArity, start, "<bbox> holds " + std::to_string(arity) + " values, expected 4");
    }

    std::array<double, 4> v{};
    for (std::size_t i = 0; i < 4; ++i) {
      const auto field = text::trim(fields[i]);
      if (!parse_number(field, v[i])) {
        fail(Errc::NumberSyntax, body, "malformed coordinate '" + std::string(field) + "'");
      }
    }

    for (auto& c : v) {
      if (c >= 0.0 && c <= 1.0) continue;
      if (opts_.strict) fail(Errc::OutOfRange, start, "coordinate " + std::to_string(c) + " outside [0,1]");
      warn(start, "coordinate " + std::to_string(c) + " clamped to [0,1]");
      c = c < 0.0 ? 0.0 : 1.0;
    }
    BBox box{v[0], v[1], v[2], v[3]};
    if (box.x1 > box.x2 || box.y1 > box.y2) {
      if (opts_.strict) fail(Errc::InvertedBox, start, "inverted box");
      warn(start, "inverted box corners swapped");
      if (box.x1 > box.x2) std::swap(box.x1, box.x2);
      if (box.y1 > box.y2) std::swap(box.y1, box.y2);
    }
    return box;
  }

  void parse_object() {
    const auto start = pos_;
    GroundedSpan span;
    span.object_text = std::string(take_payload(kObjOpen, kObjClose));
    if (text::is_blank(span.object_text)) fail(Errc::EmptyPayload, start, "empty <obj>");
    if (at_bbox()) span.bbox = parse_bbox();
    doc_.segments.emplace_back(std::move(span));
  }

  void parse_word() {
    const auto start = pos_;
    const auto word = take_payload(kCharOpen, kCharClose);
    if (text::is_blank(word)) fail(Errc::EmptyPayload, start, "empty <char>");
    if (!at_bbox()) fail(Errc::MissingBBox, pos_, "<char> without <bbox>");
    const BBox box = parse_bbox();

    if (!text::contains_whitespace(word)) {
      doc_.segments.emplace_back(OcrWord{std::string(word), box});
      return;
    }
    if (opts_.strict) fail(Errc::WhitespaceInWord, start, "whitespace inside <char>");

    // Split at whitespace; each piece takes a slice of the box width
    // proportional to its code point count.
    warn(start, "word split at whitespace");
    const auto pieces = text::split_whitespace(word);
    std::size_t total = 0;
    for (auto p : pieces) total += text::count_code_points(p);
    std::size_t cumulative = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      BBox part = box;
      part.x1 = box.x1 + box.width() * static_cast<double>(cumulative) / static_cast<double>(total);
      cumulative += text::count_code_points(pieces[i]);
      part.x2 = i + 1 == pieces.size()
                    ? box.x2
                    : box.x1 + box.width() * static_cast<double>(cumulative) / static_cast<double>(total);
      doc_.segments.emplace_back(OcrWord{std::string(pieces[i]), part});
    }
  }

  std::string_view src_;
  ParseOptions opts_;
  OutputDoc doc_;
  std::size_t pos_ = 0;
};

void validate_box(std::size_t index, const BBox& box) {
  if (!is_valid(box)) invalid_doc(index, "box outside [0,1] or inverted");
}

void append_box(std::string& out, const BBox& box, int digits) {
  out += kBBoxOpen;
  out += format_coordinate(box.x1, digits);
  out += ", ";
  out += format_coordinate(box.y1, digits);
  out += ", ";
  out += format_coordinate(box.x2, digits);
  out += ", ";
  out += format_coordinate(box.y2, digits);
  out += kBBoxClose;
}

void check_digits(int digits) {
  if (digits < 1 || digits > kMaxFractionDigits) {
    throw Error(Errc::InvalidConfig, "max_fraction_digits must be in [1, 17], got " + std::to_string(digits));
  }
}

}  // namespace

OutputDoc parse_grounding(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts, DocMode::grounding).grounding();
}

OutputDoc parse_ocr(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts, DocMode::ocr).ocr();
}

void validate(const OutputDoc& doc) {
  bool previous_was_text = false;
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& seg = doc.segments[i];
    if (doc.mode == DocMode::ocr) {
      const auto* word = std::get_if<OcrWord>(&seg);
      if (word == nullptr) invalid_doc(i, "OCR documents hold only words");
      if (word->text.empty()) invalid_doc(i, "empty word");
      if (text::contains_whitespace(word->text)) invalid_doc(i, "word contains whitespace");
      if (contains_reserved(word->text)) invalid_doc(i, "word contains a special token");
      validate_box(i, word->bbox);
      continue;
    }
    if (std::holds_alternative<OcrWord>(seg)) invalid_doc(i, "word segment in grounding document");
    if (const auto* free = std::get_if<FreeText>(&seg)) {
      if (free->text.empty()) invalid_doc(i, "empty text segment");
      if (previous_was_text) invalid_doc(i, "adjacent text segments");
      if (contains_reserved(free->text)) invalid_doc(i, "text contains a special token");
      previous_was_text = true;
      continue;
    }
    const auto& span = std::get<GroundedSpan>(seg);
    if (text::is_blank(span.object_text)) invalid_doc(i, "blank object text");
    if (contains_reserved(span.object_text)) invalid_doc(i, "object text contains a special token");
    if (span.bbox) validate_box(i, *span.bbox);
    previous_was_text = false;
  }
}

std::string serialize(const OutputDoc& doc, const ParseOptions& opts) {
  check_digits(opts.max_fraction_digits);
  validate(doc);
  std::string out;
  for (const auto& seg : doc.segments) {
    if (const auto* free = std::get_if<FreeText>(&seg)) {
      out += free->text;
    } else if (const auto* span = std::get_if<GroundedSpan>(&seg)) {
      out += kObjOpen;
      out += span->object_text;
      out += kObjClose;
      if (span->bbox) append_box(out, *span->bbox, opts.max_fraction_digits);
    } else {
      const auto& word = std::get<OcrWord>(seg);
      out += kCharOpen;
      out += word.text;
      out += kCharClose;
      append_box(out, word.bbox, opts.max_fraction_digits);
    }
  }
  return out;
}

std::string format_coordinate(double value, int digits) {
  check_digits(digits);
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, digits);
  if (ec != std::errc()) throw Error(Errc::InvalidDoc, "coordinate not representable");
  std::string s(buf.data(), end);
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

double round_coordinate(double value, int digits) {
  const auto s = format_coordinate(value, digits);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace vlmkit

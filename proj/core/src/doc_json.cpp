#include "vlmkit/doc_json.hpp"

#include "json_shim.hpp"
#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

using detail::Json;

Json box_json(const BBox& b) { return Json::array({b.x1, b.y1, b.x2, b.y2}); }

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidInput, what); }

BBox box_from(const Json& j) {
  if (!j.is_array() || j.size() != 4) bad("bbox must be an array of 4 numbers");
  for (const auto& v : j) {
    if (!v.is_number()) bad("bbox must be an array of 4 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

const std::string& string_field(const Json& seg, const char* key) {
  auto it = seg.find(key);
  if (it == seg.end() || !it->is_string()) bad(std::string("segment needs string field '") + key + "'");
  return it->get_ref<const std::string&>();
}

}  // namespace

std::string doc_to_json(const OutputDoc& doc, int indent) {
  Json segments = Json::array();
  for (const auto& seg : doc.segments) {
    if (const auto* free = std::get_if<FreeText>(&seg)) {
      segments.push_back({{"kind", "text"}, {"text", free->text}});
    } else if (const auto* span = std::get_if<GroundedSpan>(&seg)) {
      segments.push_back({{"kind", "object"},
                          {"text", span->object_text},
                          {"bbox", span->bbox ? box_json(*span->bbox) : Json(nullptr)}});
    } else {
      const auto& word = std::get<OcrWord>(seg);
      segments.push_back({{"kind", "word"}, {"text", word.text}, {"bbox", box_json(word.bbox)}});
    }
  }
  Json j = {{"mode", doc.mode == DocMode::ocr ? "ocr" : "grounding"}, {"segments", std::move(segments)}};
  return detail::dump(j, indent);
}

OutputDoc doc_from_json(std::string_view json) {
  Json j = Json::parse(json, nullptr, false);
  if (j.is_discarded()) bad("document is not valid JSON");
  if (!j.is_object()) bad("document must be a JSON object");

  OutputDoc doc;
  auto mode = j.find("mode");
  if (mode == j.end() || !mode->is_string()) bad("document needs a string 'mode'");
  if (*mode == "ocr") {
    doc.mode = DocMode::ocr;
  } else if (*mode == "grounding") {
    doc.mode = DocMode::grounding;
  } else {
    bad("mode must be 'ocr' or 'grounding'");
  }

  auto segments = j.find("segments");
  if (segments == j.end() || !segments->is_array()) bad("document needs a 'segments' array");
  for (const auto& seg : *segments) {
    if (!seg.is_object()) bad("segments must be objects");
    const auto& kind = string_field(seg, "kind");
    if (kind == "text") {
      doc.segments.emplace_back(FreeText{string_field(seg, "text")});
    } else if (kind == "word") {
      auto box = seg.find("bbox");
      if (box == seg.end()) bad("word segment needs 'bbox'");
      doc.segments.emplace_back(OcrWord{string_field(seg, "text"), box_from(*box)});
    } else if (kind == "object") {
      GroundedSpan span{string_field(seg, "text"), std::nullopt};
      auto box = seg.find("bbox");
      if (box != seg.end() && !box->is_null()) span.bbox = box_from(*box);
      doc.segments.emplace_back(std::move(span));
    } else {
      bad("unknown segment kind '" + kind + "'");
    }
  }
  validate(doc);
  return doc;
}

}  // namespace vlmkit

#pragma once

#include <string>
#include <string_view>

#include "vlmkit/grammar.hpp"

namespace vlmkit {

/// JSON projection of an OutputDoc:
///   {"mode":"ocr"|"grounding","segments":[
///     {"kind":"text","text":...} |
///     {"kind":"word","text":...,"bbox":[x1,y1,x2,y2]} |
///     {"kind":"object","text":...,"bbox":[...]|null}]}
/// `indent` < 0 gives compact output.
std::string doc_to_json(const OutputDoc& doc, int indent = -1);

/// Inverse of doc_to_json. Throws Errc::InvalidInput on schema violations and
/// Errc::InvalidDoc if the document breaks its mode invariant.
OutputDoc doc_from_json(std::string_view json);

}  // namespace vlmkit

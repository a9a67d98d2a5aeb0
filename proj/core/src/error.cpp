#include "vlmkit/error.hpp"

namespace vlmkit {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::UnclosedTag: return "UnclosedTag";
    case Errc::BadBBoxArity: return "BadBBoxArity";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::InvertedBox: return "InvertedBox";
    case Errc::NumberSyntax: return "NumberSyntax";
    case Errc::UnexpectedTag: return "UnexpectedTag";
    case Errc::UnexpectedText: return "UnexpectedText";
    case Errc::WhitespaceInWord: return "WhitespaceInWord";
    case Errc::MissingBBox: return "MissingBBox";
    case Errc::EmptyPayload: return "EmptyPayload";
    case Errc::InvalidDoc: return "InvalidDoc";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NoAdmissibleGrid: return "NoAdmissibleGrid";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NameSetMismatch: return "NameSetMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MalformedContainer: return "MalformedContainer";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vlmkit

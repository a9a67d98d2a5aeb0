#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlmkit {

enum class Errc {
  // grammar
  UnclosedTag,
  BadBBoxArity,
  OutOfRange,
  InvertedBox,
  NumberSyntax,
  UnexpectedTag,
  UnexpectedText,
  WhitespaceInWord,
  MissingBBox,
  EmptyPayload,
  InvalidDoc,
  // anyres
  InvalidConfig,
  NoAdmissibleGrid,
  // merge
  ShapeMismatch,
  NameSetMismatch,
  EmptyInput,
  MalformedContainer,
  // budget
  InvalidSpec,
  // io
  InvalidInput,
  IoError,
};

/// Stable identifier for an error code, e.g. "UnclosedTag".
std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the toolkit. `code()` is the typed error the CLI
/// reports on the diagnostic stream.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace vlmkit

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the grammar and the evaluator. Invalid byte
// sequences are treated as ordinary non-whitespace code points.
namespace vlmkit::text {

bool is_blank(std::string_view s);
bool contains_whitespace(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::size_t count_code_points(std::string_view s);

/// NFC composition, whitespace trim and, when `case_fold` is set, full
/// Unicode case folding.
std::string normalize(std::string_view s, bool case_fold);

}  // namespace vlmkit::text

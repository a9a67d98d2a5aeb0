#pragma once

#include <span>
#include <vector>

#include "vlmkit/grammar.hpp"

namespace vlmkit {

/// Version of the line clustering rule below. Bump when the rule changes so
/// outputs from different rules are not compared by accident.
inline constexpr int kClusterRuleVersion = 1;

struct LayoutOptions {
  /// A word joins a line when the vertical overlap between the word and the
  /// line's y-extent is at least this fraction of the smaller height.
  double min_overlap_ratio = 0.5;
  /// Height substituted for zero-height boxes and lines.
  double min_height = 1e-6;
};

struct Line {
  std::vector<OcrWord> words;  // ascending x1, then y1, then input index
  double y_top = 0.0;
  double y_bottom = 0.0;
};

/// Groups words into text lines by y-coordinate clustering.
///
/// Words are visited in (y1, x1, input index) order. Each word joins the most
/// recently created line it overlaps enough with (see LayoutOptions) and
/// extends that line's y-extent; otherwise it opens a new line. Lines are
/// returned top to bottom by the mean vertical center of their words.
std::vector<Line> cluster_lines(std::span<const OcrWord> words,
                                const LayoutOptions& opts = {});

/// Top-to-bottom, left-to-right order: the words of cluster_lines()
/// concatenated. Always a permutation of the input.
std::vector<OcrWord> reading_order(std::span<const OcrWord> words,
                                   const LayoutOptions& opts = {});

/// Reorders the words of an OCR document. Throws Errc::InvalidDoc for a
/// grounding document.
OutputDoc reading_order(const OutputDoc& doc, const LayoutOptions& opts = {});

}  // namespace vlmkit

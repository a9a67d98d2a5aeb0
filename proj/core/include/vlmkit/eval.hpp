#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vlmkit/bbox.hpp"
#include "vlmkit/grammar.hpp"

namespace vlmkit {

inline constexpr double kDefaultIouThreshold = 0.5;

enum class BoxUnits { pixels, normalized };

struct GroundTruthWord {
  std::string text;
  std::array<double, 4> bbox{};  // x1, y1, x2, y2 in `units`
};

/// Ground truth for one image. Boxes are always stored normalized.
struct GroundTruth {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<OcrWord> words;
};

/// Normalizes pixel boxes by the image size. Throws Errc::InvalidInput when
/// pixel boxes come without a positive image size or a box falls outside the
/// image after normalization.
GroundTruth make_ground_truth(std::string id, int width, int height, BoxUnits units,
                              std::span<const GroundTruthWord> words);

/// Intersection over union; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b) noexcept;

struct MatchPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchResult {
  std::vector<MatchPair> pairs;           // in acceptance order
  std::vector<std::size_t> unmatched_pred;  // ascending
  std::vector<std::size_t> unmatched_gt;    // ascending
};

/// Greedy one-to-one matching. Candidate pairs with iou >= threshold are
/// visited by (iou desc, pred asc, gt asc) and accepted when both ends are
/// still free. Throws Errc::InvalidConfig unless threshold is in (0, 1].
MatchResult match_boxes(std::span<const BBox> pred, std::span<const BBox> gt,
                        double threshold = kDefaultIouThreshold);

MatchResult match_words(std::span<const OcrWord> pred, const GroundTruth& gt,
                        double threshold = kDefaultIouThreshold);

struct NormalizeOptions {
  bool case_fold = true;
};

/// Raw counts for one image. Reports merge by summing counts, which is
/// exact, commutative and associative.
struct EvalCounts {
  std::size_t gt_words = 0;
  std::size_t pred_words = 0;
  std::size_t matched = 0;
  std::size_t correct = 0;  // matched and normalized texts equal

  EvalCounts& operator+=(const EvalCounts& o) noexcept {
    gt_words += o.gt_words;
    pred_words += o.pred_words;
    matched += o.matched;
    correct += o.correct;
    return *this;
  }
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

struct Fractions {
  double recognition_accuracy = 0.0;  // correct / gt, 1 when gt is empty
  double detection_recall = 0.0;      // matched / gt, 1 when gt is empty
  double detection_precision = 0.0;   // matched / pred, 1 when pred is empty and gt is empty
};

Fractions fractions_of(const EvalCounts& c) noexcept;

struct ImageReport {
  std::string id;
  EvalCounts counts;
  Fractions fractions;
  std::optional<std::string> parse_error;  // typed error name; prediction scored as empty
};

struct EvalReport {
  EvalCounts totals;
  Fractions fractions;  // micro-averaged over totals
  std::vector<ImageReport> images;
};

/// Scores one image from a precomputed match.
EvalReport recognition_accuracy(const MatchResult& match, std::span<const OcrWord> pred,
                                const GroundTruth& gt, const NormalizeOptions& norm = {});

/// Concatenates rows and sums counts.
EvalReport merge_reports(std::span<const EvalReport> reports);

/// Fraction of boxed gt spans matched by a same-text predicted span with
/// iou >= threshold, each prediction used at most once (greedy by iou with
/// the match_boxes tie-breaks). Gt spans without a box are not scored. An
/// empty scored set yields 1.
double grounding_accuracy(std::span<const GroundedSpan> pred, std::span<const GroundedSpan> gt,
                          double threshold = kDefaultIouThreshold,
                          const NormalizeOptions& norm = {});

struct GroundingCounts {
  std::size_t gt_objects = 0;
  std::size_t matched = 0;
};

GroundingCounts grounding_counts(std::span<const GroundedSpan> pred,
                                 std::span<const GroundedSpan> gt,
                                 double threshold = kDefaultIouThreshold,
                                 const NormalizeOptions& norm = {});

}  // namespace vlmkit

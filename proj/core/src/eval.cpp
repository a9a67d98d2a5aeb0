#include "vlmkit/eval.hpp"

#include <algorithm>

#include "vlmkit/error.hpp"
#include "vlmkit/text.hpp"

namespace vlmkit {
namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(Errc::InvalidConfig, "IoU threshold must be in (0, 1]");
  }
}

std::vector<MatchPair> candidates(std::span<const BBox> pred, std::span<const BBox> gt,
                                  double threshold) {
  std::vector<MatchPair> out;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const double v = iou(pred[p], gt[g]);
      if (v >= threshold) out.push_back({p, g, v});
    }
  }
  std::sort(out.begin(), out.end(), [](const MatchPair& a, const MatchPair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });
  return out;
}

double ratio_or(std::size_t num, std::size_t den, double when_empty) {
  return den == 0 ? when_empty : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

GroundTruth make_ground_truth(std::string id, int width, int height, BoxUnits units,
                              std::span<const GroundTruthWord> words) {
  GroundTruth gt{std::move(id), width, height, {}};
  if (units == BoxUnits::pixels && (width <= 0 || height <= 0)) {
    throw Error(Errc::InvalidInput, "pixel boxes need a positive image size (image '" + gt.id + "')");
  }
  gt.words.reserve(words.size());
  for (const auto& w : words) {
    BBox box{w.bbox[0], w.bbox[1], w.bbox[2], w.bbox[3]};
    if (units == BoxUnits::pixels) {
      box = {box.x1 / width, box.y1 / height, box.x2 / width, box.y2 / height};
    }
    if (!is_valid(box)) {
      throw Error(Errc::InvalidInput, "ground-truth box for '" + w.text + "' in image '" + gt.id +
                                          "' is outside the image or inverted");
    }
    gt.words.push_back({w.text, box});
  }
  return gt;
}

double iou(const BBox& a, const BBox& b) noexcept {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  const double inter = iw > 0.0 && ih > 0.0 ? iw * ih : 0.0;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_boxes(std::span<const BBox> pred, std::span<const BBox> gt, double threshold) {
  check_threshold(threshold);
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  MatchResult result;
  for (const auto& c : candidates(pred, gt, threshold)) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = gt_used[c.gt] = true;
    result.pairs.push_back(c);
  }
  for (std::size_t p = 0; p < pred.size(); ++p) {
    if (!pred_used[p]) result.unmatched_pred.push_back(p);
  }
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (!gt_used[g]) result.unmatched_gt.push_back(g);
  }
  return result;
}

MatchResult match_words(std::span<const OcrWord> pred, const GroundTruth& gt, double threshold) {
  std::vector<BBox> pb;
  std::vector<BBox> gb;
  pb.reserve(pred.size());
  gb.reserve(gt.words.size());
  for (const auto& w : pred) pb.push_back(w.bbox);
  for (const auto& w : gt.words) gb.push_back(w.bbox);
  return match_boxes(pb, gb, threshold);
}

Fractions fractions_of(const EvalCounts& c) noexcept {
  Fractions f;
  f.recognition_accuracy = ratio_or(c.correct, c.gt_words, 1.0);
  f.detection_recall = ratio_or(c.matched, c.gt_words, 1.0);
  f.detection_precision = ratio_or(c.matched, c.pred_words, c.gt_words == 0 ? 1.0 : 0.0);
  return f;
}

EvalReport recognition_accuracy(const MatchResult& match, std::span<const OcrWord> pred,
                                const GroundTruth& gt, const NormalizeOptions& norm) {
  ImageReport row;
  row.id = gt.id;
  row.counts.gt_words = gt.words.size();
  row.counts.pred_words = pred.size();
  row.counts.matched = match.pairs.size();
  for (const auto& pair : match.pairs) {
    if (pair.pred >= pred.size() || pair.gt >= gt.words.size()) {
      throw Error(Errc::InvalidInput, "match refers to words outside the given lists");
    }
    if (text::normalize(pred[pair.pred].text, norm.case_fold) ==
        text::normalize(gt.words[pair.gt].text, norm.case_fold)) {
      ++row.counts.correct;
    }
  }
  row.fractions = fractions_of(row.counts);

  EvalReport report;
  report.totals = row.counts;
  report.fractions = row.fractions;
  report.images.push_back(std::move(row));
  return report;
}

EvalReport merge_reports(std::span<const EvalReport> reports) {
  EvalReport merged;
  for (const auto& r : reports) {
    merged.totals += r.totals;
    merged.images.insert(merged.images.end(), r.images.begin(), r.images.end());
  }
  merged.fractions = fractions_of(merged.totals);
  return merged;
}

GroundingCounts grounding_counts(std::span<const GroundedSpan> pred, std::span<const GroundedSpan> gt,
                                 double threshold, const NormalizeOptions& norm) {
  check_threshold(threshold);
  std::vector<std::string> pred_text(pred.size());
  for (std::size_t p = 0; p < pred.size(); ++p) pred_text[p] = text::normalize(pred[p].object_text, norm.case_fold);

  std::vector<MatchPair> cands;
  GroundingCounts counts;
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (!gt[g].bbox) continue;
    ++counts.gt_objects;
    const auto gt_text = text::normalize(gt[g].object_text, norm.case_fold);
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (!pred[p].bbox || pred_text[p] != gt_text) continue;
      const double v = iou(*pred[p].bbox, *gt[g].bbox);
      if (v >= threshold) cands.push_back({p, g, v});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const MatchPair& a, const MatchPair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  for (const auto& c : cands) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = gt_used[c.gt] = true;
    ++counts.matched;
  }
  return counts;
}

double grounding_accuracy(std::span<const GroundedSpan> pred, std::span<const GroundedSpan> gt,
                          double threshold, const NormalizeOptions& norm) {
  const auto c = grounding_counts(pred, gt, threshold, norm);
  return ratio_or(c.matched, c.gt_objects, 1.0);
}

}  // namespace vlmkit

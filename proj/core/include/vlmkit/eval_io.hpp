#pragma once

#include <istream>
#include <string>
#include <vector>

#include "vlmkit/eval.hpp"
#include "vlmkit/grammar.hpp"

// Corpus-level scoring over JSON Lines files.
//
//   ground truth (OCR):  {"id", "width", "height", "units": "px"|"norm",
//                         "words": [{"text", "bbox": [x1, y1, x2, y2]}]}
//   ground truth (grounding): same, with "objects" in place of "words"
//   predictions:         {"id", "response": <raw model text>}
namespace vlmkit {

struct GroundingTruth {
  std::string id;
  std::vector<GroundedSpan> objects;
};

struct Prediction {
  std::string id;
  std::string response;
};

std::vector<GroundTruth> read_ocr_ground_truth(std::istream& in);
std::vector<GroundingTruth> read_grounding_ground_truth(std::istream& in);
std::vector<Prediction> read_predictions(std::istream& in);

struct CorpusOptions {
  double threshold = kDefaultIouThreshold;
  NormalizeOptions normalize;
  ParseOptions parse;
  unsigned jobs = 1;  // 0 picks the hardware concurrency
};

/// Scores every ground-truth image; rows follow ground-truth order whatever
/// the job count. Missing or unparsable predictions score as empty; the
/// parse error name is kept on the row.
EvalReport evaluate_ocr_corpus(const std::vector<GroundTruth>& gt,
                               const std::vector<Prediction>& pred,
                               const CorpusOptions& opts = {});

struct GroundingImageReport {
  std::string id;
  GroundingCounts counts;
  double accuracy = 1.0;
  std::optional<std::string> parse_error;
};

struct GroundingReport {
  GroundingCounts totals;
  double accuracy = 1.0;
  std::vector<GroundingImageReport> images;
};

GroundingReport evaluate_grounding_corpus(const std::vector<GroundingTruth>& gt,
                                          const std::vector<Prediction>& pred,
                                          const CorpusOptions& opts = {});

std::string report_to_json(const EvalReport& report, int indent = 2);
std::string report_to_json(const GroundingReport& report, int indent = 2);

}  // namespace vlmkit

#include "vlmkit/eval_io.hpp"

#include <unordered_map>
#include <unordered_set>

#include "json_shim.hpp"
#include "parallel.hpp"
#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

using detail::Json;

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw Error(Errc::InvalidInput, "line " + std::to_string(line) + ": " + what);
}

// Calls fn(json, line_number) for each non-blank line.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) bad_line(number, "not a JSON object");
    fn(j, number);
  }
}

std::string string_at(const Json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) bad_line(line, std::string("missing string '") + key + "'");
  return it->get<std::string>();
}

int int_or(const Json& j, const char* key, int fallback, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) bad_line(line, std::string("'") + key + "' must be an integer");
  return it->get<int>();
}

BoxUnits units_at(const Json& j, std::size_t line) {
  const auto units = string_at(j, "units", line);
  if (units == "px") return BoxUnits::pixels;
  if (units == "norm") return BoxUnits::normalized;
  bad_line(line, "units must be 'px' or 'norm'");
}

std::array<double, 4> box_at(const Json& j, std::size_t line) {
  if (!j.is_array() || j.size() != 4) bad_line(line, "bbox must be [x1, y1, x2, y2]");
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) bad_line(line, "bbox must be [x1, y1, x2, y2]");
    out[i] = j[i].get<double>();
  }
  return out;
}

const Json& array_at(const Json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) bad_line(line, std::string("missing array '") + key + "'");
  return *it;
}

void check_unique(std::unordered_set<std::string>& seen, const std::string& id, std::size_t line) {
  if (!seen.insert(id).second) bad_line(line, "duplicate id '" + id + "'");
}

std::unordered_map<std::string, const std::string*> index_predictions(const std::vector<Prediction>& pred) {
  std::unordered_map<std::string, const std::string*> by_id;
  for (const auto& p : pred) {
    if (!by_id.emplace(p.id, &p.response).second) {
      throw Error(Errc::InvalidInput, "duplicate prediction id '" + p.id + "'");
    }
  }
  return by_id;
}

Json counts_json(const EvalCounts& c) {
  return {{"gt_words", c.gt_words}, {"pred_words", c.pred_words}, {"matched", c.matched}, {"correct", c.correct}};
}

void put_fractions(Json& j, const Fractions& f) {
  j["recognition_accuracy"] = f.recognition_accuracy;
  j["detection_recall"] = f.detection_recall;
  j["detection_precision"] = f.detection_precision;
}

}  // namespace

std::vector<GroundTruth> read_ocr_ground_truth(std::istream& in) {
  std::vector<GroundTruth> out;
  std::unordered_set<std::string> seen;
  for_each_record(in, [&](const Json& j, std::size_t line) {
    auto id = string_at(j, "id", line);
    check_unique(seen, id, line);
    std::vector<GroundTruthWord> words;
    for (const auto& w : array_at(j, "words", line)) {
      if (!w.is_object()) bad_line(line, "words must be objects");
      words.push_back({string_at(w, "text", line), box_at(w.value("bbox", Json()), line)});
    }
    out.push_back(make_ground_truth(std::move(id), int_or(j, "width", 0, line), int_or(j, "height", 0, line),
                                    units_at(j, line), words));
  });
  return out;
}

std::vector<GroundingTruth> read_grounding_ground_truth(std::istream& in) {
  std::vector<GroundingTruth> out;
  std::unordered_set<std::string> seen;
  for_each_record(in, [&](const Json& j, std::size_t line) {
    GroundingTruth gt{string_at(j, "id", line), {}};
    check_unique(seen, gt.id, line);
    const int width = int_or(j, "width", 0, line);
    const int height = int_or(j, "height", 0, line);
    const auto units = units_at(j, line);
    for (const auto& o : array_at(j, "objects", line)) {
      if (!o.is_object()) bad_line(line, "objects must be objects");
      GroundedSpan span{string_at(o, "text", line), std::nullopt};
      auto box = o.find("bbox");
      if (box != o.end() && !box->is_null()) {
        const GroundTruthWord w{span.object_text, box_at(*box, line)};
        span.bbox = make_ground_truth(gt.id, width, height, units, std::span(&w, 1)).words.front().bbox;
      }
      gt.objects.push_back(std::move(span));
    }
    out.push_back(std::move(gt));
  });
  return out;
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  for_each_record(in, [&](const Json& j, std::size_t line) {
    out.push_back({string_at(j, "id", line), string_at(j, "response", line)});
  });
  return out;
}

EvalReport evaluate_ocr_corpus(const std::vector<GroundTruth>& gt, const std::vector<Prediction>& pred,
                               const CorpusOptions& opts) {
  const auto by_id = index_predictions(pred);
  std::vector<EvalReport> rows(gt.size());
  detail::parallel_for(gt.size(), opts.jobs, [&](std::size_t i) {
    const auto& image = gt[i];
    std::vector<OcrWord> words;
    std::optional<std::string> parse_error;
    if (auto it = by_id.find(image.id); it != by_id.end()) {
      try {
        for (auto& seg : parse_ocr(*it->second, opts.parse).segments) {
          words.push_back(std::get<OcrWord>(std::move(seg)));
        }
      } catch (const Error& e) {
        parse_error = std::string(e.code_name());
        words.clear();
      }
    }
    const auto match = match_words(words, image, opts.threshold);
    rows[i] = recognition_accuracy(match, words, image, opts.normalize);
    rows[i].images.front().parse_error = std::move(parse_error);
  });
  return merge_reports(rows);
}

GroundingReport evaluate_grounding_corpus(const std::vector<GroundingTruth>& gt,
                                          const std::vector<Prediction>& pred, const CorpusOptions& opts) {
  const auto by_id = index_predictions(pred);
  GroundingReport report;
  report.images.resize(gt.size());
  detail::parallel_for(gt.size(), opts.jobs, [&](std::size_t i) {
    auto& row = report.images[i];
    row.id = gt[i].id;
    std::vector<GroundedSpan> spans;
    if (auto it = by_id.find(gt[i].id); it != by_id.end()) {
      try {
        for (auto& seg : parse_grounding(*it->second, opts.parse).segments) {
          if (auto* span = std::get_if<GroundedSpan>(&seg)) spans.push_back(std::move(*span));
        }
      } catch (const Error& e) {
        row.parse_error = std::string(e.code_name());
        spans.clear();
      }
    }
    row.counts = grounding_counts(spans, gt[i].objects, opts.threshold, opts.normalize);
    row.accuracy = row.counts.gt_objects == 0
                       ? 1.0
                       : static_cast<double>(row.counts.matched) / static_cast<double>(row.counts.gt_objects);
  });
  for (const auto& row : report.images) {
    report.totals.gt_objects += row.counts.gt_objects;
    report.totals.matched += row.counts.matched;
  }
  report.accuracy = report.totals.gt_objects == 0 ? 1.0
                                                  : static_cast<double>(report.totals.matched) /
                                                        static_cast<double>(report.totals.gt_objects);
  return report;
}

std::string report_to_json(const EvalReport& report, int indent) {
  Json images = Json::array();
  for (const auto& row : report.images) {
    Json r = {{"id", row.id}};
    r.update(counts_json(row.counts));
    put_fractions(r, row.fractions);
    r["parse_error"] = row.parse_error ? Json(*row.parse_error) : Json(nullptr);
    images.push_back(std::move(r));
  }
  Json j = {{"images", report.images.size()}, {"totals", counts_json(report.totals)}};
  put_fractions(j, report.fractions);
  j["per_image"] = std::move(images);
  return detail::dump(j, indent);
}

std::string report_to_json(const GroundingReport& report, int indent) {
  Json images = Json::array();
  for (const auto& row : report.images) {
    images.push_back({{"id", row.id},
                      {"gt_objects", row.counts.gt_objects},
                      {"matched", row.counts.matched},
                      {"grounding_accuracy", row.accuracy},
                      {"parse_error", row.parse_error ? Json(*row.parse_error) : Json(nullptr)}});
  }
  Json j = {{"images", report.images.size()},
            {"gt_objects", report.totals.gt_objects},
            {"matched", report.totals.matched},
            {"grounding_accuracy", report.accuracy},
            {"per_image", std::move(images)}};
  return detail::dump(j, indent);
}

}  // namespace vlmkit

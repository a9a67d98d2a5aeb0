#include "vlmkit/layout.hpp"

#include <algorithm>
#include <numeric>

#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

struct Interval {
  double top;
  double bottom;
};

Interval padded(double top, double bottom, double min_height) {
  return {top, std::max(bottom, top + min_height)};
}

struct Cluster {
  std::vector<std::size_t> members;
  double y_top;
  double y_bottom;
  double center_sum = 0.0;
};

}  // namespace

std::vector<Line> cluster_lines(std::span<const OcrWord> words, const LayoutOptions& opts) {
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ba = words[a].bbox;
    const auto& bb = words[b].bbox;
    if (ba.y1 != bb.y1) return ba.y1 < bb.y1;
    if (ba.x1 != bb.x1) return ba.x1 < bb.x1;
    return a < b;
  });

  std::vector<Cluster> clusters;
  for (const auto idx : order) {
    const auto& box = words[idx].bbox;
    const auto word = padded(box.y1, box.y2, opts.min_height);
    Cluster* target = nullptr;
    for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) {
      const auto line = padded(it->y_top, it->y_bottom, opts.min_height);
      const double overlap = std::min(word.bottom, line.bottom) - std::max(word.top, line.top);
      const double shorter = std::min(word.bottom - word.top, line.bottom - line.top);
      if (overlap >= opts.min_overlap_ratio * shorter) {
        target = &*it;
        break;
      }
    }
    if (target == nullptr) {
      target = &clusters.emplace_back(Cluster{{}, box.y1, box.y2});
    } else {
      target->y_top = std::min(target->y_top, box.y1);
      target->y_bottom = std::max(target->y_bottom, box.y2);
    }
    target->members.push_back(idx);
    target->center_sum += 0.5 * (box.y1 + box.y2);
  }

  // Mean centers; stable sort keeps creation order between equal centers.
  std::vector<std::size_t> line_order(clusters.size());
  std::iota(line_order.begin(), line_order.end(), 0);
  auto mean_center = [&](std::size_t i) {
    return clusters[i].center_sum / static_cast<double>(clusters[i].members.size());
  };
  std::stable_sort(line_order.begin(), line_order.end(),
                   [&](std::size_t a, std::size_t b) { return mean_center(a) < mean_center(b); });

  std::vector<Line> lines;
  lines.reserve(clusters.size());
  for (const auto ci : line_order) {
    auto& members = clusters[ci].members;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      const auto& ba = words[a].bbox;
      const auto& bb = words[b].bbox;
      if (ba.x1 != bb.x1) return ba.x1 < bb.x1;
      if (ba.y1 != bb.y1) return ba.y1 < bb.y1;
      return a < b;
    });
    Line line;
    line.y_top = clusters[ci].y_top;
    line.y_bottom = clusters[ci].y_bottom;
    line.words.reserve(members.size());
    for (const auto m : members) line.words.push_back(words[m]);
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<OcrWord> reading_order(std::span<const OcrWord> words, const LayoutOptions& opts) {
  std::vector<OcrWord> out;
  out.reserve(words.size());
  for (auto& line : cluster_lines(words, opts)) {
    std::move(line.words.begin(), line.words.end(), std::back_inserter(out));
  }
  return out;
}

OutputDoc reading_order(const OutputDoc& doc, const LayoutOptions& opts) {
  if (doc.mode != DocMode::ocr) throw Error(Errc::InvalidDoc, "reading order needs an OCR document");
  validate(doc);
  std::vector<OcrWord> words;
  words.reserve(doc.segments.size());
  for (const auto& seg : doc.segments) words.push_back(std::get<OcrWord>(seg));

  OutputDoc out;
  out.mode = DocMode::ocr;
  for (auto& w : reading_order(words, opts)) out.segments.emplace_back(std::move(w));
  return out;
}

}  // namespace vlmkit

#pragma once

#include <algorithm>
#include <cmath>

namespace vlmkit {

/// Axis-aligned box in normalized image coordinates: (x1, y1) is the top-left
/// corner and (x2, y2) the bottom-right, each a fraction of width/height.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const noexcept { return x2 - x1; }
  double height() const noexcept { return y2 - y1; }
  double area() const noexcept { return std::max(0.0, width()) * std::max(0.0, height()); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// True when all coordinates are finite, inside [0,1], and x1 <= x2, y1 <= y2.
/// Degenerate (zero width or height) boxes are valid.
inline bool is_valid(const BBox& b) noexcept {
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  return in_unit(b.x1) && in_unit(b.y1) && in_unit(b.x2) && in_unit(b.y2) &&
         b.x1 <= b.x2 && b.y1 <= b.y2;
}

}  // namespace vlmkit

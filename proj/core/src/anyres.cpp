#include "vlmkit/anyres.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

constexpr std::int64_t kTokensPerTile384 = 576;

// Non-negative rational compared by cross-multiplication. Both terms are
// products of two ints (grid x base, image side), so products stay in 64 bits
// for grid x base below 2^32.
struct Ratio {
  std::int64_t num;
  std::int64_t den;

  friend bool operator<(const Ratio& a, const Ratio& b) {
    return a.num * b.den < b.num * a.den;
  }
};

// Linear scale of the aspect-preserving fit, capped at 1.
Ratio fit_scale(int image_w, int image_h, int rows, int cols, int base) {
  const Ratio by_width{static_cast<std::int64_t>(cols) * base, image_w};
  const Ratio by_height{static_cast<std::int64_t>(rows) * base, image_h};
  Ratio s = by_height < by_width ? by_height : by_width;
  const Ratio one{1, 1};
  return one < s ? one : s;
}

std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

int tile_side(const PatchConfig& cfg) { return cfg.base_resolution / cfg.patch_size; }

// 0 when no positive square fits.
int reduced_tokens_or_zero(int rows, int cols, const StageProfile& profile, const PatchConfig& cfg) {
  const std::int64_t side = tile_side(cfg);
  const auto views = view_count(rows, cols);
  const auto per_view = profile.max_total_tokens / views;
  const auto s = std::min(side, isqrt(per_view));
  return s < 1 ? 0 : static_cast<int>(s * s);
}

void check_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw Error(Errc::InvalidInput, "grid dimensions must be >= 1");
  }
}

void check_image(int w, int h) {
  if (w < 1 || h < 1) throw Error(Errc::InvalidInput, "image dimensions must be >= 1");
}

StageProfile make(std::string name, int grid, std::int64_t tiles, std::int64_t context) {
  return {std::move(name), grid, tiles * kTokensPerTile384, context};
}

}  // namespace

namespace profiles {

StageProfile stage1() { return make("stage1", 1, 1, 1024); }
StageProfile stage2() { return make("stage2", 2, 4 + 1, 16384); }
StageProfile stage3() { return make("stage3", 6, 9 + 1, 16384); }
StageProfile stage4() { return make("stage4", 6, 9 + 1, 9216); }
StageProfile extrapolation() { return make("extrapolate", 8, 16 + 1, 16384); }

std::span<const StageProfile> training_stages() {
  static const std::array<StageProfile, 4> stages = {stage1(), stage2(), stage3(), stage4()};
  return stages;
}

std::optional<StageProfile> by_name(std::string_view name) {
  if (name == "1" || name == "stage1") return stage1();
  if (name == "2" || name == "stage2") return stage2();
  if (name == "3" || name == "stage3") return stage3();
  if (name == "4" || name == "stage4") return stage4();
  if (name == "extrapolate") return extrapolation();
  return std::nullopt;
}

}  // namespace profiles

int tokens_per_tile(const PatchConfig& cfg) {
  if (cfg.patch_size <= 0 || cfg.patch_size > cfg.base_resolution) {
    throw Error(Errc::InvalidConfig, "patch size must be in [1, base_resolution]");
  }
  const int side = tile_side(cfg);
  return side * side;
}

std::int64_t view_count(int rows, int cols) noexcept {
  const auto tiles = static_cast<std::int64_t>(rows) * cols;
  return tiles > 1 ? tiles + 1 : tiles;
}

int reduce_tokens(int rows, int cols, const StageProfile& profile, const PatchConfig& cfg) {
  check_grid(rows, cols);
  tokens_per_tile(cfg);
  const int tokens = reduced_tokens_or_zero(rows, cols, profile, cfg);
  if (tokens == 0) {
    throw Error(Errc::NoAdmissibleGrid, std::to_string(rows) + "x" + std::to_string(cols) +
                                            " exceeds the " + profile.name + " token cap");
  }
  return tokens;
}

double covered_area(int image_w, int image_h, int rows, int cols, const PatchConfig& cfg) {
  check_image(image_w, image_h);
  check_grid(rows, cols);
  const auto s = fit_scale(image_w, image_h, rows, cols, cfg.base_resolution);
  const double scale = static_cast<double>(s.num) / static_cast<double>(s.den);
  return static_cast<double>(image_w) * image_h * scale * scale;
}

GridPlan select_grid(int image_w, int image_h, const StageProfile& profile, const PatchConfig& cfg) {
  check_image(image_w, image_h);
  tokens_per_tile(cfg);
  if (profile.max_grid_dim < 1) throw Error(Errc::InvalidConfig, "max_grid_dim must be >= 1");

  struct Candidate {
    int rows = 0;
    int cols = 0;
    int tokens = 0;
    Ratio scale{0, 1};
  };
  // True when a is strictly preferred over b.
  auto better = [](const Candidate& a, const Candidate& b) {
    if (b.scale < a.scale) return true;
    if (a.scale < b.scale) return false;
    const int tiles_a = a.rows * a.cols;
    const int tiles_b = b.rows * b.cols;
    if (tiles_a != tiles_b) return tiles_a < tiles_b;
    const int skew_a = std::abs(a.rows - a.cols);
    const int skew_b = std::abs(b.rows - b.cols);
    if (skew_a != skew_b) return skew_a < skew_b;
    return a.rows < b.rows;
  };

  std::optional<Candidate> best;
  for (int rows = 1; rows <= profile.max_grid_dim; ++rows) {
    for (int cols = 1; cols <= profile.max_grid_dim; ++cols) {
      const int tokens = reduced_tokens_or_zero(rows, cols, profile, cfg);
      if (tokens == 0) continue;
      Candidate c{rows, cols, tokens, fit_scale(image_w, image_h, rows, cols, cfg.base_resolution)};
      if (!best || better(c, *best)) best = c;
    }
  }
  if (!best) throw Error(Errc::NoAdmissibleGrid, "no grid fits the " + profile.name + " token cap");

  GridPlan plan;
  plan.rows = best->rows;
  plan.cols = best->cols;
  plan.canvas_width = best->cols * cfg.base_resolution;
  plan.canvas_height = best->rows * cfg.base_resolution;
  plan.tokens_per_tile = best->tokens;
  plan.total_tokens = view_count(best->rows, best->cols) * best->tokens;
  plan.covered_area = covered_area(image_w, image_h, best->rows, best->cols, cfg);
  return plan;
}

std::pair<int, int> ocr_upscale(int image_w, int image_h) {
  check_image(image_w, image_h);
  const std::int64_t longer = std::max(image_w, image_h);
  if (longer >= kOcrMinLongSide) return {image_w, image_h};
  // round(v * 2304 / longer), half away from zero, in integers.
  auto scale = [&](std::int64_t v) {
    return static_cast<int>((2 * v * kOcrMinLongSide + longer) / (2 * longer));
  };
  return {scale(image_w), scale(image_h)};
}

}  // namespace vlmkit

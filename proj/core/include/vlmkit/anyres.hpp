#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace vlmkit {

struct PatchConfig {
  int base_resolution = 384;  // pixels per tile side
  int patch_size = 16;        // pixels per patch side
};

/// Per-stage tiling limits.
struct StageProfile {
  std::string name;
  int max_grid_dim = 1;              // rows and cols each <= this
  std::int64_t max_total_tokens = 0; // visual token cap, base view included
  std::int64_t context_length = 0;   // sequence length in tokens
};

namespace profiles {
StageProfile stage1();
StageProfile stage2();
StageProfile stage3();
StageProfile stage4();
/// 8x8 grid with a (16+1)x576 cap, beyond the training configuration.
StageProfile extrapolation();

/// The four training stages in order.
std::span<const StageProfile> training_stages();
/// Looks up "1".."4" or "extrapolate".
std::optional<StageProfile> by_name(std::string_view name);
}  // namespace profiles

struct GridPlan {
  int rows = 1;
  int cols = 1;
  int canvas_width = 0;   // cols x base_resolution
  int canvas_height = 0;  // rows x base_resolution
  int tokens_per_tile = 0;
  std::int64_t total_tokens = 0;
  double covered_area = 0.0;  // image pixels preserved by the aspect-fit
};

/// floor(base_resolution / patch_size)^2. Throws Errc::InvalidConfig when
/// patch_size <= 0 or patch_size > base_resolution.
int tokens_per_tile(const PatchConfig& cfg);

/// Number of tile views a rows x cols grid feeds the encoder. Multi-tile
/// grids add one base thumbnail view; a 1x1 grid is its own base view.
std::int64_t view_count(int rows, int cols) noexcept;

/// Per-tile token count for a rows x cols grid under the profile cap: the full
/// tokens_per_tile if view_count x tokens_per_tile fits, else the largest
/// perfect square s^2 with view_count x s^2 under the cap. Throws
/// Errc::NoAdmissibleGrid if even one token per view exceeds the cap.
int reduce_tokens(int rows, int cols, const StageProfile& profile, const PatchConfig& cfg);

/// Image pixels that survive an aspect-preserving fit into the rows x cols
/// canvas, capped at the original image area (the fit never upsamples
/// information into existence).
double covered_area(int image_w, int image_h, int rows, int cols, const PatchConfig& cfg);

/// Picks the admissible grid maximizing covered_area(); ties go to fewer
/// tiles, then smaller |rows - cols|, then fewer rows.
GridPlan select_grid(int image_w, int image_h, const StageProfile& profile,
                     const PatchConfig& cfg = {});

/// Longer side at which OCR inputs reach the finest supported tiling
/// (384 x 6).
inline constexpr int kOcrMinLongSide = 2304;

/// Scales images whose longer side is under kOcrMinLongSide so that side
/// becomes exactly kOcrMinLongSide; the other side is rounded to nearest,
/// ties away from zero. Larger images are returned unchanged.
std::pair<int, int> ocr_upscale(int image_w, int image_h);

}  // namespace vlmkit

#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vlmkit/anyres.hpp"
#include "vlmkit/error.hpp"

namespace vlmkit {
namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

TEST(TokensPerTile, PatchArithmetic) {
  EXPECT_EQ(tokens_per_tile({384, 16}), 576);
  EXPECT_EQ(tokens_per_tile({384, 14}), 729);
  EXPECT_EQ(tokens_per_tile({16, 16}), 1);
  EXPECT_EQ(tokens_per_tile({384, 16}) * 10, profiles::stage3().max_total_tokens);
}

TEST(TokensPerTile, InvalidConfig) {
  EXPECT_EQ(error_of([] { tokens_per_tile({384, 0}); }), Errc::InvalidConfig);
  EXPECT_EQ(error_of([] { tokens_per_tile({384, -16}); }), Errc::InvalidConfig);
  EXPECT_EQ(error_of([] { tokens_per_tile({16, 32}); }), Errc::InvalidConfig);
}

TEST(Profiles, TrainingTable) {
  EXPECT_EQ(profiles::stage1().max_total_tokens, 576);
  EXPECT_EQ(profiles::stage2().max_total_tokens, 5 * 576);
  EXPECT_EQ(profiles::stage3().max_total_tokens, 10 * 576);
  EXPECT_EQ(profiles::stage4().max_total_tokens, 10 * 576);
  EXPECT_EQ(profiles::extrapolation().max_total_tokens, 17 * 576);
  EXPECT_EQ(profiles::stage1().max_grid_dim, 1);
  EXPECT_EQ(profiles::stage2().max_grid_dim, 2);
  EXPECT_EQ(profiles::stage3().max_grid_dim, 6);
  EXPECT_EQ(profiles::stage4().max_grid_dim, 6);
  EXPECT_EQ(profiles::extrapolation().max_grid_dim, 8);
  EXPECT_EQ(profiles::stage1().context_length, 1024);
  EXPECT_EQ(profiles::stage2().context_length, 16384);
  EXPECT_EQ(profiles::stage3().context_length, 16384);
  EXPECT_EQ(profiles::stage4().context_length, 9216);
  EXPECT_FALSE(profiles::by_name("5").has_value());
}

TEST(ReduceTokens, Examples) {
  const auto s3 = profiles::stage3();
  EXPECT_EQ(reduce_tokens(3, 3, s3, {}), 576);
  // Scan s downward from 24 until 17 * s^2 fits 5760.
  int s = 24;
  while (17 * s * s > 5760) --s;
  EXPECT_EQ(s, 18);
  EXPECT_EQ(reduce_tokens(4, 4, s3, {}), 324);
  for (const auto& p : {profiles::stage1(), profiles::stage2(), s3, profiles::stage4(), profiles::extrapolation()}) {
    EXPECT_EQ(reduce_tokens(1, 1, p, {}), 576) << p.name;
  }
}

TEST(ReduceTokens, NoAdmissibleGrid) {
  const StageProfile tiny{"tiny", 4, 4, 0};
  EXPECT_EQ(reduce_tokens(1, 1, tiny, {}), 4);
  EXPECT_EQ(error_of([&] { reduce_tokens(2, 2, tiny, {}); }), Errc::NoAdmissibleGrid);
  const StageProfile none{"none", 2, 0, 0};
  EXPECT_EQ(error_of([&] { select_grid(100, 100, none, {}); }), Errc::NoAdmissibleGrid);
}

TEST(SelectGrid, TableExamples) {
  const auto p1 = select_grid(384, 384, profiles::stage1());
  EXPECT_EQ(p1.rows, 1);
  EXPECT_EQ(p1.cols, 1);
  EXPECT_EQ(p1.total_tokens, 576);

  const auto p2 = select_grid(768, 768, profiles::stage2());
  EXPECT_EQ(p2.rows, 2);
  EXPECT_EQ(p2.cols, 2);
  EXPECT_EQ(p2.total_tokens, (4 + 1) * 576);
  EXPECT_EQ(p2.canvas_width, 768);
  EXPECT_EQ(p2.canvas_height, 768);
}

TEST(SelectGrid, WidePageStage3) {
  const auto cfg = PatchConfig{};
  EXPECT_GT(covered_area(2304, 768, 2, 4, cfg), covered_area(2304, 768, 1, 6, cfg));
  const auto plan = select_grid(2304, 768, profiles::stage3(), cfg);
  const auto brute = testing::brute_force_grid(2304, 768, profiles::stage3(), cfg);
  ASSERT_TRUE(brute);
  EXPECT_EQ(plan.rows, brute->rows);
  EXPECT_EQ(plan.cols, brute->cols);
  EXPECT_EQ(plan.tokens_per_tile, brute->tokens);
  EXPECT_LE(plan.total_tokens, profiles::stage3().max_total_tokens);
}

TEST(SelectGrid, SmallImagesStayOnOneTile) {
  const auto plan = select_grid(200, 120, profiles::stage3());
  EXPECT_EQ(plan.rows * plan.cols, 1);
  EXPECT_DOUBLE_EQ(plan.covered_area, 200.0 * 120.0);
}

TEST(SelectGrid, AgreesWithBruteForce) {
  testing::Rng rng(31337);
  const std::vector<StageProfile> all = {profiles::stage1(), profiles::stage2(), profiles::stage3(),
                                         profiles::stage4(), profiles::extrapolation()};
  for (int i = 0; i < 2000; ++i) {
    const int w = 1 + static_cast<int>(testing::pick(rng, 5000));
    const int h = 1 + static_cast<int>(testing::pick(rng, 5000));
    const auto& profile = all[testing::pick(rng, all.size())];
    const PatchConfig cfg{384, testing::pick(rng, 2) ? 16 : 14};
    const auto plan = select_grid(w, h, profile, cfg);
    const auto brute = testing::brute_force_grid(w, h, profile, cfg);
    ASSERT_TRUE(brute);
    ASSERT_EQ(std::pair(plan.rows, plan.cols), std::pair(brute->rows, brute->cols)) << w << "x" << h << " " << profile.name;
    ASSERT_EQ(plan.tokens_per_tile, brute->tokens);
    ASSERT_LE(plan.total_tokens, profile.max_total_tokens);
    ASSERT_LE(plan.rows, profile.max_grid_dim);
    ASSERT_LE(plan.cols, profile.max_grid_dim);
  }
}

TEST(SelectGrid, LargerCapNeverLosesCoverage) {
  testing::Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const int w = 1 + static_cast<int>(testing::pick(rng, 4000));
    const int h = 1 + static_cast<int>(testing::pick(rng, 4000));
    StageProfile p{"p", 6, static_cast<std::int64_t>(1 + testing::pick(rng, 20000)), 0};
    const auto before = select_grid(w, h, p);
    p.max_total_tokens += static_cast<std::int64_t>(testing::pick(rng, 5000));
    EXPECT_GE(select_grid(w, h, p).covered_area, before.covered_area);
  }
}

TEST(OcrUpscale, Examples) {
  EXPECT_EQ(ocr_upscale(1000, 800), std::pair(2304, 1843));
  EXPECT_EQ(ocr_upscale(2304, 100), std::pair(2304, 100));
  EXPECT_EQ(ocr_upscale(4000, 3000), std::pair(4000, 3000));
  EXPECT_EQ(ocr_upscale(800, 1000), std::pair(1843, 2304));
  // 1 x 2304/1536 = 1.5 rounds away from zero.
  EXPECT_EQ(ocr_upscale(1536, 1), std::pair(2304, 2));
  EXPECT_EQ(ocr_upscale(1, 1), std::pair(2304, 2304));
  EXPECT_EQ(kOcrMinLongSide, 384 * 6);
}

TEST(OcrUpscale, IdempotentAndNeverShrinks) {
  testing::Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + static_cast<int>(testing::pick(rng, 3000));
    const int h = 1 + static_cast<int>(testing::pick(rng, 3000));
    const auto once = ocr_upscale(w, h);
    EXPECT_EQ(ocr_upscale(once.first, once.second), once);
    EXPECT_GE(once.first, w);
    EXPECT_GE(once.second, h);
    EXPECT_GE(std::max(once.first, once.second), kOcrMinLongSide);
  }
}

}  // namespace
}  // namespace vlmkit

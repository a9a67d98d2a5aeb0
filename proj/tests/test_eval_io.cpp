#include <gtest/gtest.h>

#include <sstream>

#include "vlmkit/error.hpp"
#include "vlmkit/eval_io.hpp"

namespace vlmkit {
namespace {

constexpr const char* kGt =
    R"({"id":"p1","width":1000,"height":500,"units":"px","words":[{"text":"Hello","bbox":[100,50,300,100]},{"text":"World","bbox":[400,50,600,100]}]})"
    "\n\n"
    R"({"id":"p2","width":10,"height":10,"units":"norm","words":[{"text":"x","bbox":[0.1,0.1,0.2,0.2]}]})"
    "\n";

TEST(EvalIo, ReadsGroundTruth) {
  std::istringstream in(kGt);
  const auto gt = read_ocr_ground_truth(in);
  ASSERT_EQ(gt.size(), 2u);
  EXPECT_EQ(gt[0].words[0].bbox, (BBox{0.1, 0.1, 0.3, 0.2}));
  EXPECT_EQ(gt[1].words[0].bbox, (BBox{0.1, 0.1, 0.2, 0.2}));
}

TEST(EvalIo, RejectsBadRecords) {
  for (const char* line : {"[1,2]", R"({"id":"a","units":"px","width":0,"height":0,"words":[{"text":"a","bbox":[0,0,1,1]}]})",
                           R"({"id":"a","units":"cm","words":[]})", R"({"id":"a","units":"norm"})",
                           R"({"id":"a","units":"norm","words":[{"text":"a","bbox":[0,0,1]}]})"}) {
    std::istringstream in(line);
    EXPECT_THROW(read_ocr_ground_truth(in), Error) << line;
  }
  std::istringstream dup(R"({"id":"a","units":"norm","words":[]})"
                         "\n"
                         R"({"id":"a","units":"norm","words":[]})");
  EXPECT_THROW(read_ocr_ground_truth(dup), Error);
}

TEST(EvalIo, CorpusScoring) {
  std::istringstream gt_in(kGt);
  const auto gt = read_ocr_ground_truth(gt_in);
  std::istringstream pred_in(
      R"({"id":"p1","response":"<char>hello</char><bbox>0.1, 0.1, 0.3, 0.2</bbox><char>Word</char><bbox>0.4, 0.1, 0.6, 0.2</bbox>"})"
      "\n"
      R"({"id":"p2","response":"<char>x</char><bbox>0.1, 0.1"})");
  const auto pred = read_predictions(pred_in);
  for (unsigned jobs : {1u, 4u}) {
    CorpusOptions opts;
    opts.jobs = jobs;
    const auto report = evaluate_ocr_corpus(gt, pred, opts);
    ASSERT_EQ(report.images.size(), 2u);
    EXPECT_EQ(report.images[0].id, "p1");
    EXPECT_EQ(report.images[0].counts.correct, 1u);
    EXPECT_EQ(report.images[1].parse_error, "UnclosedTag");
    EXPECT_EQ(report.totals.gt_words, 3u);
    EXPECT_EQ(report.totals.matched, 2u);
    EXPECT_DOUBLE_EQ(report.fractions.recognition_accuracy, 1.0 / 3.0);
  }
}

TEST(EvalIo, MissingPredictionScoresEmpty) {
  std::istringstream gt_in(kGt);
  const auto report = evaluate_ocr_corpus(read_ocr_ground_truth(gt_in), {});
  EXPECT_EQ(report.totals.matched, 0u);
  EXPECT_FALSE(report.images[0].parse_error.has_value());
}

TEST(EvalIo, GroundingCorpus) {
  std::istringstream gt_in(
      R"({"id":"g","width":100,"height":100,"units":"px","objects":[{"text":"cat","bbox":[0,0,20,20]},{"text":"sun","bbox":null}]})");
  std::istringstream pred_in(R"({"id":"g","response":"A <obj>cat</obj><bbox>0, 0, 0.2, 0.2</bbox>."})");
  const auto report = evaluate_grounding_corpus(read_grounding_ground_truth(gt_in), read_predictions(pred_in));
  EXPECT_EQ(report.totals.gt_objects, 1u);
  EXPECT_EQ(report.totals.matched, 1u);
  EXPECT_EQ(report.accuracy, 1.0);
}

}  // namespace
}  // namespace vlmkit

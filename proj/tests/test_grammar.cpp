#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vlmkit/error.hpp"
#include "vlmkit/grammar.hpp"

namespace vlmkit {
namespace {

ParseOptions lenient() {
  ParseOptions o;
  o.strict = false;
  return o;
}

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::IoError;
}

TEST(ParseGrounding, SingleObject) {
  const auto doc = parse_grounding("<obj>cat</obj><bbox>0.1, 0.2, 0.5, 0.8</bbox>");
  ASSERT_EQ(doc.segments.size(), 1u);
  const auto& span = std::get<GroundedSpan>(doc.segments[0]);
  EXPECT_EQ(span.object_text, "cat");
  ASSERT_TRUE(span.bbox.has_value());
  EXPECT_EQ(*span.bbox, (BBox{0.1, 0.2, 0.5, 0.8}));
  EXPECT_EQ(doc.mode, DocMode::grounding);
  EXPECT_FALSE(doc.query_marker);
}

TEST(ParseGrounding, EmptyInput) {
  EXPECT_TRUE(parse_grounding("").segments.empty());
  EXPECT_TRUE(parse_ocr("").segments.empty());
}

TEST(ParseGrounding, FreeTextAroundObject) {
  const auto doc = parse_grounding("a <obj>dog</obj><bbox>0, 0, 1, 1</bbox> runs");
  ASSERT_EQ(doc.segments.size(), 3u);
  EXPECT_EQ(std::get<FreeText>(doc.segments[0]).text, "a ");
  EXPECT_EQ(std::get<GroundedSpan>(doc.segments[1]), (GroundedSpan{"dog", BBox{0, 0, 1, 1}}));
  EXPECT_EQ(std::get<FreeText>(doc.segments[2]).text, " runs");
}

TEST(ParseGrounding, ObjectWithoutBox) {
  const auto doc = parse_grounding("<obj>sky</obj> is blue");
  ASSERT_EQ(doc.segments.size(), 2u);
  EXPECT_FALSE(std::get<GroundedSpan>(doc.segments[0]).bbox.has_value());
}

TEST(ParseGrounding, LeadingMarkerIsConsumed) {
  const auto doc = parse_grounding("<gro><obj>cat</obj><bbox>0,0,1,1</bbox>");
  EXPECT_TRUE(doc.query_marker);
  ASSERT_EQ(doc.segments.size(), 1u);
  EXPECT_EQ(serialize(doc), "<obj>cat</obj><bbox>0, 0, 1, 1</bbox>");
}

TEST(ParseGrounding, UnknownTagsStayLiteral) {
  const auto doc = parse_grounding("<b>bold</b> <ocr> 1 < 2");
  ASSERT_EQ(doc.segments.size(), 1u);
  EXPECT_EQ(std::get<FreeText>(doc.segments[0]).text, "<b>bold</b> <ocr> 1 < 2");
}

TEST(ParseGrounding, NumberSyntaxVariants) {
  const auto doc = parse_grounding("<obj>a</obj><bbox> .1 ,0.2,  +0.5 ,\t1. </bbox>");
  EXPECT_EQ(*std::get<GroundedSpan>(doc.segments[0]).bbox, (BBox{0.1, 0.2, 0.5, 1.0}));
}

TEST(ParseGrounding, ArityOracle) {
  // Only four fields parse; the reference tokenizer agrees on the count.
  const std::vector<std::string> values = {"0.1", "0.2", "0.3", "0.4", "0.5", "0.6"};
  for (std::size_t arity = 0; arity <= 6; ++arity) {
    std::string payload;
    for (std::size_t i = 0; i < arity; ++i) payload += (i ? ", " : "") + values[i];
    ASSERT_EQ(testing::reference_bbox_arity(payload), arity);
    const auto text = "<obj>x</obj><bbox>" + payload + "</bbox>";
    if (arity == 4) {
      EXPECT_NO_THROW(parse_grounding(text));
    } else {
      EXPECT_EQ(error_of([&] { parse_grounding(text); }), Errc::BadBBoxArity) << text;
    }
  }
  EXPECT_EQ(error_of([] { parse_grounding("<obj>x</obj><bbox>0.3, 0.2</bbox>"); }), Errc::BadBBoxArity);
}

TEST(ParseGrounding, TypedErrors) {
  EXPECT_EQ(error_of([] { parse_grounding("<obj>cat"); }), Errc::UnclosedTag);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>cat</obj><bbox>0,0,1,1"); }), Errc::UnclosedTag);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>c</obj><bbox>a,0,1,1</bbox>"); }), Errc::NumberSyntax);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>c</obj><bbox>0,,1,1</bbox>"); }), Errc::NumberSyntax);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>c</obj><bbox>1e-1,0,1,1</bbox>"); }), Errc::NumberSyntax);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>c</obj><bbox>0,0,1.5,1</bbox>"); }), Errc::OutOfRange);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>c</obj><bbox>-0.1,0,1,1</bbox>"); }), Errc::OutOfRange);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>c</obj><bbox>0.6,0,0.5,1</bbox>"); }), Errc::InvertedBox);
  EXPECT_EQ(error_of([] { parse_grounding("<obj> </obj>"); }), Errc::EmptyPayload);
  EXPECT_EQ(error_of([] { parse_grounding("text</obj>"); }), Errc::UnexpectedTag);
  EXPECT_EQ(error_of([] { parse_grounding("<bbox>0,0,1,1</bbox>"); }), Errc::UnexpectedTag);
  EXPECT_EQ(error_of([] { parse_grounding("<char>w</char><bbox>0,0,1,1</bbox>"); }), Errc::UnexpectedTag);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>a<obj>b</obj>"); }), Errc::UnexpectedTag);
  EXPECT_EQ(error_of([] { parse_grounding("<obj>a</obj> <bbox>0,0,1,1</bbox>"); }), Errc::UnexpectedTag);
}

TEST(ParseGrounding, DegenerateBoxIsLegal) {
  const auto doc = parse_grounding("<obj>|</obj><bbox>0.5, 0.1, 0.5, 0.1</bbox>");
  EXPECT_EQ(std::get<GroundedSpan>(doc.segments[0]).bbox->area(), 0.0);
}

TEST(ParseGrounding, LenientClampsWithOneWarningPerValue) {
  const auto doc = parse_grounding("<obj>c</obj><bbox>-0.2, 0.1, 1.3, 1.01</bbox>", lenient());
  EXPECT_EQ(*std::get<GroundedSpan>(doc.segments[0]).bbox, (BBox{0.0, 0.1, 1.0, 1.0}));
  EXPECT_EQ(doc.warnings.size(), 3u);
}

TEST(ParseGrounding, LenientSwapsInvertedBox) {
  const auto doc = parse_grounding("<obj>c</obj><bbox>0.6, 0.9, 0.5, 0.1</bbox>", lenient());
  EXPECT_EQ(*std::get<GroundedSpan>(doc.segments[0]).bbox, (BBox{0.5, 0.1, 0.6, 0.9}));
  EXPECT_EQ(doc.warnings.size(), 1u);
}

TEST(ParseOcr, TwoWords) {
  const auto doc = parse_ocr(
      "<char>Hello</char><bbox>0.1, 0.1, 0.3, 0.2</bbox><char>World</char><bbox>0.4, 0.1, 0.6, 0.2</bbox>");
  ASSERT_EQ(doc.segments.size(), 2u);
  EXPECT_EQ(std::get<OcrWord>(doc.segments[0]), (OcrWord{"Hello", {0.1, 0.1, 0.3, 0.2}}));
  EXPECT_EQ(std::get<OcrWord>(doc.segments[1]), (OcrWord{"World", {0.4, 0.1, 0.6, 0.2}}));
  EXPECT_EQ(doc.mode, DocMode::ocr);
}

TEST(ParseOcr, InterSpanWhitespaceIgnored) {
  const auto doc = parse_ocr(" \n<char>a</char><bbox>0,0,1,1</bbox>\n\t<char>b</char><bbox>0,0,1,1</bbox> ");
  EXPECT_EQ(doc.segments.size(), 2u);
}

TEST(ParseOcr, EmbeddedWhitespaceRejectedInStrictMode) {
  EXPECT_EQ(error_of([] { parse_ocr("<char>a b</char><bbox>0,0,1,1</bbox>"); }), Errc::WhitespaceInWord);
  // U+3000 ideographic space counts as whitespace.
  EXPECT_EQ(error_of([] { parse_ocr("<char>\xea\xb0\x80\xe3\x80\x80\xed\x95\x9c</char><bbox>0,0,1,1</bbox>"); }),
            Errc::WhitespaceInWord);
}

TEST(ParseOcr, LenientSplitsWordAcrossBox) {
  const auto doc = parse_ocr("<char>ab cd</char><bbox>0, 0, 0.8, 1</bbox>", lenient());
  ASSERT_EQ(doc.segments.size(), 2u);
  const auto& first = std::get<OcrWord>(doc.segments[0]);
  const auto& second = std::get<OcrWord>(doc.segments[1]);
  EXPECT_EQ(first.text, "ab");
  EXPECT_EQ(second.text, "cd");
  EXPECT_DOUBLE_EQ(first.bbox.x2, 0.4);
  EXPECT_DOUBLE_EQ(second.bbox.x1, 0.4);
  EXPECT_EQ(second.bbox.x2, 0.8);
  EXPECT_EQ(doc.warnings.size(), 1u);
}

TEST(ParseOcr, TypedErrors) {
  EXPECT_EQ(error_of([] { parse_ocr("<obj>a</obj><bbox>0,0,1,1</bbox>"); }), Errc::UnexpectedTag);
  EXPECT_EQ(error_of([] { parse_ocr("junk<char>a</char><bbox>0,0,1,1</bbox>"); }), Errc::UnexpectedText);
  EXPECT_EQ(error_of([] { parse_ocr("<char>a</char>"); }), Errc::MissingBBox);
  EXPECT_EQ(error_of([] { parse_ocr("<char>a</char>text"); }), Errc::MissingBBox);
  EXPECT_EQ(error_of([] { parse_ocr("<char></char><bbox>0,0,1,1</bbox>"); }), Errc::EmptyPayload);
  EXPECT_EQ(error_of([] { parse_ocr("<char>a<bbox>0,0,1,1</bbox>"); }), Errc::UnclosedTag);
  EXPECT_EQ(error_of([] { parse_ocr("<gro><char>a</char><bbox>0,0,1,1</bbox>"); }), Errc::UnexpectedTag);
}

TEST(ParseOcr, LenientDropsStrayText) {
  const auto doc = parse_ocr("Sure! <char>a</char><bbox>0,0,1,1</bbox>", lenient());
  EXPECT_EQ(doc.segments.size(), 1u);
  EXPECT_EQ(doc.warnings.size(), 1u);
}

TEST(Parser, IsTotalOnArbitraryBytes) {
  testing::Rng rng(7);
  const std::string alphabet = "<>/objcharx,. 0123456789\xea\xb0";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const auto len = testing::pick(rng, 40);
    for (std::size_t k = 0; k < len; ++k) s += alphabet[testing::pick(rng, alphabet.size())];
    for (const bool strict : {true, false}) {
      ParseOptions o;
      o.strict = strict;
      for (auto parse : {parse_grounding, parse_ocr}) {
        try {
          const auto doc = parse(s, o);
          // Every accepted string reaches a serializer fixpoint.
          const auto once = serialize(doc);
          EXPECT_EQ(serialize(parse(once, o)), once);
        } catch (const Error&) {
        }
      }
    }
  }
}

TEST(Serialize, CanonicalFormat) {
  OutputDoc doc;
  doc.segments.emplace_back(GroundedSpan{"cat", BBox{0.1, 0.2, 0.5, 0.8}});
  EXPECT_EQ(serialize(doc), "<obj>cat</obj><bbox>0.1, 0.2, 0.5, 0.8</bbox>");
  EXPECT_EQ(serialize(OutputDoc{}), "");
}

TEST(Serialize, OcrFormat) {
  OutputDoc doc;
  doc.mode = DocMode::ocr;
  doc.segments.emplace_back(OcrWord{"Hi", {0.25, 0.5, 0.75, 1}});
  EXPECT_EQ(serialize(doc), "<char>Hi</char><bbox>0.25, 0.5, 0.75, 1</bbox>");
}

TEST(Serialize, RoundsHalfEvenAndTrims) {
  EXPECT_EQ(format_coordinate(0.125, 2), "0.12");
  EXPECT_EQ(format_coordinate(0.375, 2), "0.38");
  EXPECT_EQ(format_coordinate(0.5, 3), "0.5");
  EXPECT_EQ(format_coordinate(1.0, 3), "1");
  EXPECT_EQ(format_coordinate(0.0, 3), "0");
  EXPECT_EQ(format_coordinate(0.0004, 3), "0");
  EXPECT_EQ(format_coordinate(0.9996, 3), "1");
  EXPECT_EQ(format_coordinate(0.123456, 3), "0.123");
  EXPECT_EQ(format_coordinate(0.1, 1), "0.1");
  EXPECT_THROW(format_coordinate(0.1, 0), Error);
}

TEST(Serialize, RejectsInvalidDocs) {
  auto invalid = [](OutputDoc doc) { return error_of([&] { serialize(doc); }); };
  OutputDoc ocr_with_text;
  ocr_with_text.mode = DocMode::ocr;
  ocr_with_text.segments.emplace_back(FreeText{"x"});
  EXPECT_EQ(invalid(ocr_with_text), Errc::InvalidDoc);

  OutputDoc grounding_with_word;
  grounding_with_word.segments.emplace_back(OcrWord{"x", {0, 0, 1, 1}});
  EXPECT_EQ(invalid(grounding_with_word), Errc::InvalidDoc);

  OutputDoc adjacent;
  adjacent.segments = {FreeText{"a"}, FreeText{"b"}};
  EXPECT_EQ(invalid(adjacent), Errc::InvalidDoc);

  OutputDoc token_in_text;
  token_in_text.segments = {FreeText{"see <obj>"}};
  EXPECT_EQ(invalid(token_in_text), Errc::InvalidDoc);

  OutputDoc bad_box;
  bad_box.segments = {GroundedSpan{"a", BBox{0.5, 0, 0.4, 1}}};
  EXPECT_EQ(invalid(bad_box), Errc::InvalidDoc);

  OutputDoc spaced_word;
  spaced_word.mode = DocMode::ocr;
  spaced_word.segments = {OcrWord{"a b", {0, 0, 1, 1}}};
  EXPECT_EQ(invalid(spaced_word), Errc::InvalidDoc);
}

TEST(RoundTrip, FuzzedDocuments) {
  testing::Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const auto doc = i % 2 ? testing::random_grounding_doc(rng) : testing::random_ocr_doc(rng);
    const auto text = serialize(doc);
    const auto parsed = doc.mode == DocMode::ocr ? parse_ocr(text) : parse_grounding(text);
    ASSERT_EQ(parsed, testing::rounded(doc)) << text;
    ASSERT_EQ(serialize(parsed), text);
  }
}

TEST(RoundTrip, PrecisionIsConfigurable) {
  ParseOptions o;
  o.max_fraction_digits = 6;
  OutputDoc doc;
  doc.segments.emplace_back(GroundedSpan{"a", BBox{0.1234567, 0, 1, 1}});
  EXPECT_EQ(serialize(doc, o), "<obj>a</obj><bbox>0.123457, 0, 1, 1</bbox>");
}

}  // namespace
}  // namespace vlmkit

#include <random>

#include <gtest/gtest.h>

#include "striped/atlas_io.hpp"
#include "striped/svg.hpp"
#include "support/examples.hpp"
#include "support/generators.hpp"

using namespace striped;
using namespace striped::testing;

TEST(Parse, BoundedCylinder) {
  auto a = parse_atlas("strip S\n lower a@0,1\n upper b@0,1\nglue b a +");
  ASSERT_EQ(a.strips.size(), 1u);
  EXPECT_EQ(a.strips[0].lower, std::vector<IntervalId>{"a"});
  EXPECT_EQ(a.strips[0].upper, std::vector<IntervalId>{"b"});
  EXPECT_EQ(a.gluings, (std::vector<Gluing>{{"b", "a", Sign::Plus}}));
  EXPECT_EQ(a.strips[0].geom.at("a"), (GeomInterval{make_rational(0), make_rational(1)}));
}

TEST(Parse, TwoIntervalStrip) {
  EXPECT_EQ(parse_atlas("strip S\n upper a@-2,-1 b@1,2"), two_interval_strip());
}

TEST(Parse, CommentsBlankLinesAndInfinities) {
  auto a = parse_atlas("# header\n\nstrip S   # trailing\n\tlower a@-inf,0 b@1/2,inf\n");
  EXPECT_EQ(a.strips[0].geom.at("a"), (GeomInterval{std::nullopt, make_rational(0)}));
  EXPECT_EQ(a.strips[0].geom.at("b"), (GeomInterval{make_rational(1, 2), std::nullopt}));
  EXPECT_EQ(parse_atlas("strip S\n  lower a@0.25,1.5").strips[0].geom.at("a"),
            (GeomInterval{make_rational(1, 4), make_rational(3, 2)}));
}

TEST(Parse, SelfGlueIsValidationError) {
  try {
    parse_atlas("strip S\n lower a\nglue a a +");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("interval glued to itself"), std::string::npos);
  }
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  auto expect_at = [](const std::string& text, std::size_t line, std::size_t column) {
    try {
      parse_atlas_unchecked(text);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
      EXPECT_EQ(e.column(), column) << text;
    }
  };
  expect_at("lower a", 1, 1);
  expect_at("strip S\n  upper a@0", 2, 11);
  expect_at("strip S\n  upper a@0,x", 2, 13);
  expect_at("strip S\nglue a b *", 2, 10);
  expect_at("strip S\nglue a b", 2, 1);
  expect_at("strip\n", 1, 1);
  expect_at("strip S\n lower a\n lower b", 3, 2);
  expect_at("strip S\n frobnicate", 2, 2);
  expect_at("strip S\n lower a@0,1 a@2,3", 2, 14);
}

TEST(Parse, DuplicateIdsAreRejected) {
  EXPECT_THROW(parse_atlas("strip S\nstrip S"), ValidationError);
  EXPECT_THROW(parse_atlas("strip S\n lower a\nstrip T\n upper a"), ValidationError);
}

TEST(Serialize, Canonical) {
  const char* canonical = "strip S\n  lower a@-inf,1/2\n  upper b c@3,inf\nstrip T\nglue b a -\n";
  StripedAtlas a = parse_atlas_unchecked("strip S\n  upper b c@3,inf\n  lower a@-inf,1/2\nstrip T\nglue b a -\n");
  EXPECT_EQ(serialize_atlas(a), canonical);
  EXPECT_EQ(serialize_atlas(parse_atlas_unchecked(canonical)), canonical);
}

TEST(Serialize, RoundTripProperty) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    AtlasParams p;
    p.geometry = trial % 2 == 0;
    StripedAtlas a = random_atlas(rng, p);
    if (trial % 7 == 0 && !a.strips.empty() && !a.strips[0].lower.empty() && p.geometry) {
      a.strips[0].geom[a.strips[0].lower.front()].lo.reset();
    }
    std::string text = serialize_atlas(a);
    EXPECT_EQ(parse_atlas(text), a);
    EXPECT_EQ(serialize_atlas(parse_atlas(text)), text);
  }
}

TEST(Svg, OpenStrip) {
  std::string svg = render_svg(open_strip());
  EXPECT_EQ(svg.find("<?xml"), 0u);
  std::size_t rects = 0, leaves = 0;
  for (std::size_t pos = 0; (pos = svg.find("class=\"strip\"", pos)) != std::string::npos; ++pos) ++rects;
  for (std::size_t pos = 0; (pos = svg.find("class=\"leaf\"", pos)) != std::string::npos; ++pos) ++leaves;
  EXPECT_EQ(rects, 1u);
  EXPECT_GE(leaves, 3u);
  EXPECT_EQ(svg.find("stroke=\"#"), std::string::npos);
}

TEST(Svg, CylinderPairSharesColor) {
  std::string svg = render_svg(cylinder());
  std::size_t first = svg.find("stroke=\"#d62728\"");
  ASSERT_NE(first, std::string::npos);
  EXPECT_NE(svg.find("stroke=\"#d62728\"", first + 1), std::string::npos);
  EXPECT_NE(svg.find("a (+)"), std::string::npos);
  EXPECT_NE(svg.find("b (+)"), std::string::npos);
}

TEST(Svg, TreeHasThreeStripsAndTwoColors) {
  std::string svg = render_svg(tree());
  std::size_t rects = 0;
  for (std::size_t pos = 0; (pos = svg.find("class=\"strip\"", pos)) != std::string::npos; ++pos) ++rects;
  EXPECT_EQ(rects, 3u);
  for (const char* color : {"#d62728", "#1f77b4"}) {
    std::size_t count = 0;
    std::string needle = std::string("stroke=\"") + color + "\"";
    for (std::size_t pos = 0; (pos = svg.find(needle, pos)) != std::string::npos; ++pos) ++count;
    EXPECT_EQ(count, 2u) << color;
  }
  EXPECT_EQ(svg, render_svg(tree()));
}

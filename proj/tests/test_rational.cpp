#include <haarsys/generators.hpp>
#include <haarsys/linalg.hpp>
#include <haarsys/rational.hpp>

#include <gtest/gtest.h>

using namespace haarsys;

TEST(Rational, ParsesNormalizedForms) {
  EXPECT_EQ(parse_rational("3/4").value, Rational(3, 4));
  EXPECT_EQ(parse_rational("-7").value, Rational(-7));
  EXPECT_EQ(parse_rational("0").value, Rational(0));
  EXPECT_EQ(parse_rational("-1/2").status, RationalSyntax::ok);
}

TEST(Rational, RejectsUnnormalizedForms) {
  for (const char* text : {"2/4", "-0", "0/5", "6/3", "-10/4"}) {
    EXPECT_EQ(parse_rational(text).status, RationalSyntax::unnormalized) << text;
  }
}

TEST(Rational, RejectsMalformedText) {
  for (const char* text : {"", "x", "1/", "/2", "1/0", "1/-2", "1.5", " 1", "1/2/3", "+1", "--1", "007", "01/2"}) {
    EXPECT_NE(parse_rational(text).status, RationalSyntax::ok) << text;
  }
  EXPECT_THROW(rat("2/4"), std::invalid_argument);
}

TEST(Rational, PrintsCanonicalText) {
  EXPECT_EQ(to_string(rat(6, 8)), "3/4");
  EXPECT_EQ(to_string(rat(-4, 2)), "-2");
}

TEST(Rational, RoundTripsThroughText) {
  RandomSource rng(7);
  for (int i = 0; i < 200; ++i) {
    const Rational q = rng.rational(1000, 1000);
    const auto parsed = parse_rational(to_string(q));
    ASSERT_EQ(parsed.status, RationalSyntax::ok);
    EXPECT_EQ(parsed.value, q);
  }
}

namespace {

RationalMatrix random_matrix(RandomSource& rng, std::size_t rows, std::size_t cols) {
  RationalMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.coin() ? Rational(0) : rng.rational(3, 2);
  }
  return m;
}

}  // namespace

TEST(Linalg, NullspaceVectorsSolveTheSystem) {
  RandomSource rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = static_cast<std::size_t>(rng.between(1, 6));
    const auto cols = static_cast<std::size_t>(rng.between(1, 7));
    const RationalMatrix m = random_matrix(rng, rows, cols);
    const auto basis = nullspace(m);
    EXPECT_EQ(rank(m) + basis.size(), cols);
    for (const auto& v : basis) {
      for (std::size_t r = 0; r < rows; ++r) {
        Rational dot = 0;
        for (std::size_t c = 0; c < cols; ++c) dot += m(r, c) * v[c];
        EXPECT_EQ(dot, 0);
      }
    }
  }
}

TEST(Linalg, RankOfKnownMatrices) {
  RationalMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = Rational(static_cast<long>(i + j));
  }
  EXPECT_EQ(rank(m), 2u);
  RationalMatrix id(2, 2);
  id(0, 0) = 1;
  id(1, 1) = 1;
  EXPECT_EQ(rank(id), 2u);
  EXPECT_TRUE(nullspace(id).empty());
}

TEST(Linalg, SpanMembership) {
  const std::vector<std::vector<Rational>> rows{{1, 0, 1}, {0, 1, 1}};
  EXPECT_TRUE(in_span(rows, {2, 3, 5}));
  EXPECT_FALSE(in_span(rows, {1, 1, 1}));
  EXPECT_TRUE(in_span(rows, {0, 0, 0}));
}

#include "oracles.hpp"

#include <ksmooth/linalg.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ksmooth;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rational("3/6"), q(1, 2));
  EXPECT_EQ(parse_rational("-4/2"), q(-2));
  EXPECT_EQ(parse_rational("+7"), q(7));
  EXPECT_EQ(parse_rational(" 0/5 "), q(0));
  EXPECT_EQ(to_string(parse_rational("0/5")), "0");
  EXPECT_EQ(to_string(q(-2, 4)), "-1/2");
  EXPECT_EQ(to_string(q(6, 3)), "2");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("1/-2"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational(""), Error);
  EXPECT_THROW(parse_rational("1.5"), Error);
}

TEST(Rational, ExactArithmeticReducesToLowestTerms) {
  Rational a = q(1, 6) + q(1, 3);
  EXPECT_EQ(a.get_num(), 1);
  EXPECT_EQ(a.get_den(), 2);
  Rational z = q(1, 3) - q(1, 3);
  EXPECT_EQ(z.get_den(), 1);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(RatMatrix::identity(3)), 3u);
  EXPECT_EQ(rank(RatMatrix::from_rows({{q(1), q(2)}, {q(2), q(4)}, {q(3), q(6)}})), 1u);
  // Vectorized tensors sign(x) ⊗ x for the four vertex classes of the cube:
  // the norming data of (1/3)·Identity from l_inf^3 to l_1^3.
  const std::vector<RatVector> xs = {
      {q(1), q(1), q(1)}, {q(-1), q(1), q(1)}, {q(-1), q(-1), q(1)}, {q(1), q(-1), q(1)}};
  std::vector<RatVector> tensors;
  for (const auto &x : xs)
    tensors.push_back(outer(x, x).vectorized());
  ASSERT_EQ(oracle::rank(tensors), 4u);
  EXPECT_EQ(rank(tensors), 4u);
}

TEST(SpanDim, Examples) {
  const std::vector<RatVector> pair = {{q(1), q(1), q(1)}, {q(-1), q(-1), q(-1)}};
  EXPECT_EQ(span_dim(pair), 1u);
  EXPECT_EQ(span_dim(std::vector<RatVector>{}), 0u);
  const std::vector<RatVector> three = {
      {q(1), q(1), q(1)}, {q(-1), q(1), q(1)}, {q(-1), q(-1), q(1)}};
  ASSERT_EQ(oracle::det(three), q(4));
  EXPECT_EQ(span_dim(three), 3u);
  const std::vector<RatVector> ragged = {{q(1)}, {q(1), q(2)}};
  EXPECT_THROW(span_dim(ragged), Error);
}

TEST(SolveSquare, Examples) {
  auto x = solve_square(RatMatrix::identity(3), RatVector{q(1), q(2), q(3)});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (RatVector{q(1), q(2), q(3)}));

  EXPECT_FALSE(solve_square(RatMatrix::from_rows({{q(1), q(1)}, {q(1), q(1)}}),
                            RatVector{q(1), q(1)}));

  const auto A = RatMatrix::from_rows({{q(1), q(1)}, {q(1), q(-1)}});
  auto y = solve_square(A, RatVector{q(1), q(0)});
  ASSERT_TRUE(y);
  EXPECT_EQ(*y, (RatVector{q(1, 2), q(1, 2)}));
  EXPECT_EQ(A.apply(*y), (RatVector{q(1), q(0)}));

  EXPECT_THROW(solve_square(A, RatVector{q(1)}), Error);
}

TEST(Outer, Examples) {
  EXPECT_EQ(outer(RatVector{q(1), q(1)}, RatVector{q(1), q(1), q(1)}),
            RatMatrix::from_rows({{q(1), q(1), q(1)}, {q(1), q(1), q(1)}}));
  EXPECT_EQ(outer(RatVector{q(1), q(0)}, RatVector{q(0), q(1)}),
            RatMatrix::from_rows({{q(0), q(1)}, {q(0), q(0)}}));
  EXPECT_EQ(outer(RatVector{q(-1), q(1)}, RatVector{q(-1), q(1), q(1)}),
            RatMatrix::from_rows({{q(1), q(-1), q(-1)}, {q(-1), q(1), q(1)}}));
}

TEST(Dot, Examples) {
  EXPECT_EQ(dot(RatVector{q(1), q(1), q(1)}, RatVector{q(1), q(1), q(1)}), q(3));
  EXPECT_EQ(dot(RatVector{q(1), q(-1), q(0)}, RatVector{q(1), q(1), q(1)}), q(0));
  EXPECT_EQ(dot(RatVector{q(1, 3), q(1, 3), q(1, 3)}, RatVector{q(1), q(1), q(1)}), q(1));
  EXPECT_THROW(dot(RatVector{q(1)}, RatVector{q(1), q(2)}), Error);
}

// Properties -----------------------------------------------------------------

TEST(RankProperty, TransposeInvariantAndMatchesOracle) {
  std::mt19937_64 rng(20261019);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + rng() % 12, c = 1 + rng() % 12;
    auto m = oracle::random_matrix(rng, r, c);
    // Inject dependencies: some rows are combinations of others.
    for (std::size_t i = 2; i < r; ++i)
      if (rng() % 3 == 0)
        m[i] = add(scale(oracle::random_rational(rng, 3, 3), m[i - 1]), m[i - 2]);
    const auto M = RatMatrix::from_rows(m);
    const auto expected = oracle::rank(m);
    EXPECT_EQ(rank(M), expected);
    EXPECT_EQ(rank(M.transpose()), expected);
  }
}

TEST(SpanDimProperty, InvariantUnderScalingAndNegation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto vs = oracle::random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6);
    const auto before = span_dim(vs);
    const std::size_t i = rng() % vs.size();
    Rational c = oracle::random_rational(rng, 4, 4);
    if (c == 0)
      c = -3;
    vs[i] = scale(c, vs[i]);
    EXPECT_EQ(span_dim(vs), before);
    vs[i] = negate(vs[i]);
    EXPECT_EQ(span_dim(vs), before);
  }
}

TEST(SolveSquareProperty, SolutionsAreExact) {
  std::mt19937_64 rng(11);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto rows = oracle::random_matrix(rng, n, n, 3, 3);
    if (n > 2 && rng() % 4 == 0)
      rows[n - 1] = add(rows[0], rows[1]);
    const auto A = RatMatrix::from_rows(rows);
    const auto b = oracle::random_matrix(rng, 1, n).front();
    const auto x = solve_square(A, b);
    EXPECT_EQ(x.has_value(), oracle::det(rows) != 0);
    if (x) {
      ++solved;
      EXPECT_EQ(A.apply(*x), b);
    }
  }
  EXPECT_GT(solved, 100);
}

TEST(OuterProperty, RankOneForNonzeroFactors) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = oracle::random_matrix(rng, 1, 1 + rng() % 5).front();
    auto x = oracle::random_matrix(rng, 1, 1 + rng() % 5).front();
    if (is_zero(f) || is_zero(x))
      continue;
    EXPECT_EQ(rank(outer(f, x)), 1u);
  }
}

} // namespace

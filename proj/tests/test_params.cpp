#include <gtest/gtest.h>

#include <random>

#include "halftime/errors.hpp"
#include "halftime/params.hpp"

using namespace halftime;

TEST(Params, PublishedDimensions) {
  const auto p = variant(24);
  EXPECT_EQ(p.w, 3u);
  EXPECT_EQ(p.b, 8u);
  EXPECT_EQ(p.f, 8u);
  EXPECT_EQ(p.d, 7u);
  EXPECT_EQ(p.e, 9u);
  EXPECT_EQ(p.k, 3u);
  EXPECT_EQ(p.transform.rows(), 3);
  EXPECT_EQ(p.transform.cols(), 9);
}

TEST(Params, EveryVariantIsConsistent) {
  const std::size_t expected_p[] = {2, 2, 3, 3};
  std::size_t i = 0;
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    EXPECT_EQ(p.output_bytes, width);
    EXPECT_EQ(p.k * 8, width);
    EXPECT_EQ(p.d + p.k, p.e + 1);
    EXPECT_EQ(p.code.min_distance(), p.k);
    EXPECT_EQ(static_cast<std::size_t>(p.p), expected_p[i++]);
    EXPECT_NO_THROW(check_shape(p));
  }
}

TEST(Params, UnsupportedWidthThrows) {
  EXPECT_THROW(variant(17), ConfigurationError);
  EXPECT_THROW(variant(0), ConfigurationError);
  EXPECT_THROW(variant(48), ConfigurationError);
}

TEST(Params, CheckShapeRejectsBadMatrices) {
  auto p = variant(24);
  p.transform(0, 0) = 6;
  EXPECT_THROW(check_shape(p), ConfigurationError);

  auto q = variant(24);
  q.transform = TransformMatrix::Ones(3, 8);
  EXPECT_THROW(check_shape(q), ConfigurationError);

  auto r = variant(24);
  r.d = 6;
  EXPECT_THROW(check_shape(r), ConfigurationError);
}

TEST(Params, ShiftAddCoefficients) {
  for (std::int64_t c : {0, 1, 2, 3, 4, 5, 7, 8, 9}) EXPECT_TRUE(is_shift_add_coefficient(c)) << c;
  for (std::int64_t c : {-1, 6, 10, 11, 16}) EXPECT_FALSE(is_shift_add_coefficient(c)) << c;
  EXPECT_THROW(coefficient_multiply<std::uint64_t>(6, 1), ConfigurationError);
}

TEST(Params, CoefficientMultiplyMatchesMultiplication) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1'000'000; ++i) {
    const std::uint64_t x = rng();
    const std::int64_t c = std::array<std::int64_t, 9>{0, 1, 2, 3, 4, 5, 7, 8, 9}[i % 9];
    ASSERT_EQ(coefficient_multiply<std::uint64_t>(c, x), static_cast<std::uint64_t>(c) * x);
  }
  EXPECT_EQ(coefficient_multiply<std::uint64_t>(7, 9), 63u);
  EXPECT_EQ(coefficient_multiply<std::uint64_t>(9, 7), 63u);
}

TEST(Params, CoefficientMultiplyWrapsAtNarrowWidths) {
  for (unsigned x = 0; x < 256; ++x) {
    for (std::int64_t c : {0, 1, 2, 3, 4, 5, 7, 8, 9}) {
      ASSERT_EQ(coefficient_multiply<std::uint8_t>(c, static_cast<std::uint8_t>(x)),
                static_cast<std::uint8_t>(static_cast<unsigned>(c) * x));
    }
  }
  for (unsigned x = 0; x < 65536; x += 7) {
    ASSERT_EQ(coefficient_multiply<std::uint16_t>(9, static_cast<std::uint16_t>(x)),
              static_cast<std::uint16_t>(9u * x));
  }
}

TEST(ErasureCode, XorParityMasks) {
  const auto code = ErasureCode::xor_parity(6, 2);
  EXPECT_EQ(code.arity_in(), 6u);
  EXPECT_EQ(code.arity_out(), 7u);
  EXPECT_EQ(code.min_distance(), 2u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(code.mask(i, 0, 0), 1u);
    EXPECT_EQ(code.mask(i, 0, 1), 2u);
  }
}

TEST(ErasureCode, Gf8IdentityCoefficientIsIdentityMatrix) {
  const auto code = ErasureCode::gf8({{1}, {2}}, 2);
  EXPECT_EQ(code.mask(0, 0, 0), 0b001u);
  EXPECT_EQ(code.mask(0, 0, 1), 0b010u);
  EXPECT_EQ(code.mask(0, 0, 2), 0b100u);
  // Multiplication by t: 1 -> t, t -> t^2, t^2 -> t + 1.
  EXPECT_EQ(code.mask(1, 0, 0), 0b100u);
  EXPECT_EQ(code.mask(1, 0, 1), 0b101u);
  EXPECT_EQ(code.mask(1, 0, 2), 0b010u);
}

TEST(ErasureCode, FromMasksChecksSizes) {
  EXPECT_THROW(ErasureCode::from_masks(3, 4, 1, 2, {1, 1}), ConfigurationError);
  EXPECT_NO_THROW(ErasureCode::from_masks(3, 4, 1, 2, {1, 1, 1}));
}

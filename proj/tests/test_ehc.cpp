#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "halftime/ehc.hpp"
#include "halftime/errors.hpp"
#include "naive_hash.hpp"

using namespace halftime;

namespace {

Blocks<std::uint64_t> random_blocks(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Blocks<std::uint64_t> out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = rng();
  return out;
}

}  // namespace

TEST(Encode, XorParityAppendsXor) {
  const auto code = ErasureCode::xor_parity(2, 1);
  Blocks<std::uint64_t> items(1, 2);
  items << 0b1010, 0b0110;
  const auto enc = encode(items, code);
  ASSERT_EQ(enc.cols(), 3);
  EXPECT_EQ(enc(0, 0), 0b1010u);
  EXPECT_EQ(enc(0, 1), 0b0110u);
  EXPECT_EQ(enc(0, 2), 0b1100u);
}

TEST(Encode, RepetitionCode) {
  const auto code = ErasureCode::xor_parity(1, 2);
  Blocks<std::uint64_t> items(1, 2);
  items << 5, 9;
  const auto enc = encode(items, code);
  EXPECT_EQ(enc(0, 2), 5u);
  EXPECT_EQ(enc(0, 3), 9u);
}

TEST(Encode, ZeroInputGivesZeroCodeword) {
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    const Blocks<std::uint64_t> zero = Blocks<std::uint64_t>::Zero(8, static_cast<Eigen::Index>(p.d * p.w));
    EXPECT_TRUE((encode(zero, p.code) == 0).all()) << width;
  }
}

TEST(Encode, SystematicAndLinear) {
  std::mt19937_64 rng(2);
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    const auto cols = static_cast<Eigen::Index>(p.d * p.w);
    const auto a = random_blocks(8, cols, rng);
    const auto b = random_blocks(8, cols, rng);
    const auto ea = encode(a, p.code), eb = encode(b, p.code);
    EXPECT_TRUE((ea.leftCols(cols) == a).all());
    const Blocks<std::uint64_t> sum = a.binaryExpr(b, std::bit_xor<std::uint64_t>());
    const Blocks<std::uint64_t> esum = ea.binaryExpr(eb, std::bit_xor<std::uint64_t>());
    EXPECT_TRUE((encode(sum, p.code) == esum).all()) << width;
  }
}

TEST(Encode, MatchesGf8Arithmetic) {
  std::mt19937_64 rng(3);
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    const auto np = naive::params(width);
    const auto items = random_blocks(8, static_cast<Eigen::Index>(p.d * p.w), rng);
    std::vector<naive::Item> in(p.d, naive::Item(p.w, std::vector<std::uint64_t>(8)));
    for (std::size_t i = 0; i < p.d; ++i)
      for (std::size_t c = 0; c < p.w; ++c)
        for (std::size_t lane = 0; lane < 8; ++lane)
          in[i][c][lane] = items(static_cast<Eigen::Index>(lane), static_cast<Eigen::Index>(i * p.w + c));
    const auto expected = naive::encode(np, in);
    const auto enc = encode(items, p.code);
    for (std::size_t i = 0; i < p.e; ++i)
      for (std::size_t c = 0; c < p.w; ++c)
        for (std::size_t lane = 0; lane < 8; ++lane)
          ASSERT_EQ(enc(static_cast<Eigen::Index>(lane), static_cast<Eigen::Index>(i * p.w + c)), expected[i][c][lane]);
  }
}

TEST(Encode, RejectsWrongItemCount) {
  const auto p = variant(24);
  const Blocks<std::uint64_t> items = Blocks<std::uint64_t>::Zero(8, 20);
  EXPECT_THROW(encode(items, p.code), UsageError);
}

TEST(Combine, MatchesWideMultiply) {
  std::mt19937_64 rng(5);
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    const auto hashed = random_blocks(8, static_cast<Eigen::Index>(p.e), rng);
    const auto out = combine(hashed, p.transform);
    for (Eigen::Index r = 0; r < out.cols(); ++r) {
      for (Eigen::Index lane = 0; lane < 8; ++lane) {
        unsigned __int128 acc = 0;
        for (Eigen::Index c = 0; c < hashed.cols(); ++c)
          acc += static_cast<unsigned __int128>(p.transform(r, c)) * hashed(lane, c);
        ASSERT_EQ(out(lane, r), static_cast<std::uint64_t>(acc));
      }
    }
  }
}

TEST(Combine, IdentityColumnsPassThrough) {
  // The 40-byte matrix starts with I_5.
  const auto p = variant(40);
  std::mt19937_64 rng(6);
  Blocks<std::uint64_t> hashed = random_blocks(8, 9, rng);
  hashed.rightCols(4).setZero();
  const auto out = combine(hashed, p.transform);
  EXPECT_TRUE((out == hashed.leftCols(5)).all());
}

TEST(Ehc, CompositionAndCount) {
  std::mt19937_64 rng(7);
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    const auto items = random_blocks(8, static_cast<Eigen::Index>(p.d * p.w), rng);
    std::vector<std::uint64_t> entropy(p.e * p.w);
    for (auto& v : entropy) v = rng();
    MulTally tally;
    const auto out = ehc(items, entropy, p, &tally);
    EXPECT_EQ(tally.count, p.e * p.w * 8) << width;
    const auto staged = combine(hash_encoded(encode(items, p.code), std::span<const std::uint64_t>(entropy), p.w),
                                p.transform);
    EXPECT_TRUE((out == staged).all());
    ASSERT_EQ(out.cols(), static_cast<Eigen::Index>(p.k));
  }
}

TEST(Ehc, MatchesNaivePerInstance) {
  std::mt19937_64 rng(8);
  for (auto width : kVariantWidths) {
    const auto p = variant(width);
    const auto np = naive::params(width);
    const auto items = random_blocks(8, static_cast<Eigen::Index>(p.d * p.w), rng);
    std::vector<std::uint64_t> entropy(p.e * p.w);
    for (auto& v : entropy) v = rng();
    std::vector<naive::Item> in(p.d, naive::Item(p.w, std::vector<std::uint64_t>(8)));
    for (std::size_t i = 0; i < p.d; ++i)
      for (std::size_t c = 0; c < p.w; ++c)
        for (std::size_t lane = 0; lane < 8; ++lane)
          in[i][c][lane] = items(static_cast<Eigen::Index>(lane), static_cast<Eigen::Index>(i * p.w + c));
    const auto expected = naive::ehc(np, in, entropy.data());
    const auto out = ehc(items, entropy, p);
    for (std::size_t r = 0; r < p.k; ++r)
      for (std::size_t lane = 0; lane < 8; ++lane)
        ASSERT_EQ(out(static_cast<Eigen::Index>(lane), static_cast<Eigen::Index>(r)), expected[r][lane]);
  }
}

TEST(Ehc, ShortEntropyThrows) {
  const auto p = variant(24);
  const Blocks<std::uint64_t> items = Blocks<std::uint64_t>::Zero(8, 21);
  std::vector<std::uint64_t> entropy(p.e * p.w - 1);
  EXPECT_THROW(ehc(items, entropy, p), SizingError);
}

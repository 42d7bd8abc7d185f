#include <gtest/gtest.h>

#include <bit>

#include "halftime/errors.hpp"
#include "halftime/seed.hpp"

using namespace halftime;

TEST(SplitMix, KnownStreamFromZero) {
  // Reference outputs of splitmix64 started at state 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xe220a8397b1dcdafull);
  EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ull);
  EXPECT_EQ(rng(), 0x06c45d188009454full);
}

TEST(Seed, FoldIsXorOfLittleEndianWords) {
  MasterSeed m{};
  m[0] = 1;
  m[8] = 2;
  m[31] = 0x80;
  EXPECT_EQ(fold_master(m), 3ull ^ (0x80ull << 56));
}

TEST(Seed, Deterministic) {
  MasterSeed m{};
  m[5] = 9;
  const auto a = expand_seed(m, 100), b = expand_seed(m, 100);
  EXPECT_TRUE(std::equal(a.words().begin(), a.words().end(), b.words().begin()));
  EXPECT_EQ(a.master(), m);
}

TEST(Seed, PrefixStable) {
  const auto a = expand_seed(MasterSeed{}, 10), b = expand_seed(MasterSeed{}, 1000);
  EXPECT_TRUE(std::equal(a.words().begin(), a.words().end(), b.words().begin()));
}

TEST(Seed, NeededZeroIsEmpty) { EXPECT_EQ(expand_seed(MasterSeed{}, 0).size(), 0u); }

TEST(Seed, BitFlipAvalanche) {
  const auto base = expand_seed(MasterSeed{}, 64);
  double total = 0;
  for (std::size_t bit = 0; bit < 256; ++bit) {
    MasterSeed m{};
    m[bit / 8] = static_cast<std::uint8_t>(1u << (bit % 8));
    const auto flipped = expand_seed(m, 64);
    for (std::size_t i = 0; i < 64; ++i) total += std::popcount(base.words()[i] ^ flipped.words()[i]);
  }
  EXPECT_GE(total / (256.0 * 64.0), 20.0);
}

TEST(Seed, HexRoundTrip) {
  MasterSeed m{};
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i * 7);
  EXPECT_EQ(parse_master_hex(master_hex(m)), m);
  EXPECT_EQ(master_hex(MasterSeed{}), std::string(64, '0'));
  EXPECT_EQ(parse_master_hex(std::string(64, 'F'))[31], 0xff);
  EXPECT_THROW(parse_master_hex("abc"), UsageError);
  EXPECT_THROW(parse_master_hex(std::string(63, '0') + "g"), UsageError);
}

TEST(SeedLayout, Regions24At1MiB) {
  const auto p = variant(24);
  const auto l = SeedLayout::for_length(p, 1u << 20);
  EXPECT_EQ(l.instances, 780u);
  EXPECT_EQ(l.tail_words, 32u);
  EXPECT_EQ(l.height, 4u);
  EXPECT_EQ(l.ehc_size, 27u);
  EXPECT_EQ(l.tree_size, 7u * 4u * 3u);
  EXPECT_EQ(l.finalize_size, 8u * 8u * 4u * 3u);
  EXPECT_EQ(l.remainder_size, 168u + 2u);
  EXPECT_EQ(l.total(), 1049u);
  EXPECT_EQ(l.tree_offset, l.ehc_offset + l.ehc_size);
  EXPECT_EQ(l.finalize_offset, l.tree_offset + l.tree_size);
  EXPECT_EQ(l.remainder_offset, l.finalize_offset + l.finalize_size);
}

TEST(SeedLayout, ShortInputs) {
  const auto p = variant(24);
  const auto empty = SeedLayout::for_length(p, 0);
  EXPECT_EQ(empty.instances, 0u);
  EXPECT_EQ(empty.height, 0u);
  EXPECT_EQ(empty.finalize_height, 1u);
  const auto one = SeedLayout::for_length(p, p.instance_bytes());
  EXPECT_EQ(one.instances, 1u);
  EXPECT_EQ(one.height, 0u);
  EXPECT_EQ(one.tail_words, 0u);
  // A partial final word still counts as a word.
  EXPECT_EQ(SeedLayout::for_length(p, p.instance_bytes() - 1).instances, 1u);
  EXPECT_EQ(SeedLayout::for_length(p, p.instance_bytes() - 8).instances, 0u);
}

TEST(Seed, FoldIgnoresRepeatedWords) {
  // XOR folding maps 00 01 .. 1f to state zero, the same as the zero master.
  MasterSeed counting{};
  for (std::size_t i = 0; i < counting.size(); ++i) counting[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(fold_master(counting), 0u);
}

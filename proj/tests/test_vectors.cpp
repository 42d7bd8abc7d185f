#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "halftime/errors.hpp"
#include "halftime/vectors.hpp"
#include "naive_hash.hpp"

using namespace halftime;
using namespace halftime::vectors;

namespace {

std::vector<VectorRecord> golden() {
  std::ifstream in(HALFTIME_VECTORS_FILE);
  EXPECT_TRUE(in.good()) << HALFTIME_VECTORS_FILE;
  return read_records(in);
}

}  // namespace

TEST(Vectors, GoldenFileMatchesLibrary) {
  const auto records = golden();
  EXPECT_EQ(records.size(), standard_grid().size());
  for (const auto& m : check_records(records)) ADD_FAILURE() << "line " << m.line << ": got " << m.actual;
}

TEST(Vectors, GoldenFileMatchesNaiveRestatement) {
  for (const auto& r : golden()) {
    const auto input = generate_input(r.generator, r.length);
    const auto words = naive::hash(naive::params(r.variant), input, r.master.data());
    std::string hex;
    static const char* digits = "0123456789abcdef";
    for (auto w : words)
      for (int byte = 0; byte < 8; ++byte) {
        const unsigned v = static_cast<unsigned>(w >> (8 * byte)) & 0xff;
        hex += digits[v >> 4];
        hex += digits[v & 15];
      }
    EXPECT_EQ(hex, r.digest_hex) << r.variant << " " << r.length;
  }
}

TEST(Vectors, GridCoversInstanceBoundaries) {
  for (auto width : kVariantWidths) {
    const auto lengths = grid_lengths(width);
    const std::uint64_t ib = variant(width).instance_bytes();
    for (std::uint64_t n : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{167 * 8}, std::uint64_t{168 * 8},
                            std::uint64_t{1024}, (std::uint64_t{1} << 20) - 1, std::uint64_t{1} << 20,
                            (std::uint64_t{1} << 20) + 1, std::uint64_t{4} << 20, ib - 8, ib, ib + 8}) {
      EXPECT_NE(std::find(lengths.begin(), lengths.end(), n), lengths.end()) << width << " " << n;
    }
  }
}

TEST(Vectors, EmitThenCheckRoundTrip) {
  std::vector<VectorRecord> records;
  for (std::uint64_t n : {0u, 9u, 2000u}) {
    VectorRecord r;
    r.variant = 32;
    r.length = n;
    r.generator = "splitmix:0000000000000001";
    r.digest_hex = compute_digest(r);
    records.push_back(r);
  }
  std::stringstream io;
  write_records(io, records);
  const auto back = read_records(io);
  EXPECT_EQ(back, records);
  EXPECT_TRUE(check_records(back).empty());
}

TEST(Vectors, FlippedDigitIsReported) {
  auto records = golden();
  ASSERT_GT(records.size(), 5u);
  auto& d = records[5].digest_hex;
  d[3] = d[3] == '0' ? '1' : '0';
  const auto bad = check_records(records);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].line, 6u);
}

TEST(Vectors, Generators) {
  EXPECT_EQ(generate_input("zeros", 5), std::vector<std::uint8_t>(5, 0));
  const auto a = generate_input("splitmix:0000000000000000", 10);
  // First splitmix64 output from state 0 is e220a8397b1dcdaf.
  EXPECT_EQ(a[0], 0xaf);
  EXPECT_EQ(a[7], 0xe2);
  EXPECT_EQ(a.size(), 10u);
  const auto longer = generate_input("splitmix:0000000000000000", 100);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), longer.begin()));
  EXPECT_THROW(generate_input("random", 4), UsageError);
  EXPECT_THROW(generate_input("splitmix:12", 4), UsageError);
}

TEST(Vectors, ParseErrors) {
  const std::string hex64(64, '0');
  EXPECT_THROW(parse_record("24," + hex64 + ",5,zeros"), UsageError);
  EXPECT_THROW(parse_record("24," + hex64 + ",x,zeros," + std::string(48, '0')), UsageError);
  EXPECT_THROW(parse_record("24," + hex64 + ",5,zeros," + std::string(47, '0')), UsageError);
  EXPECT_THROW(parse_record("24," + hex64 + ",5,zeros," + std::string(48, 'A')), UsageError);
  EXPECT_NO_THROW(parse_record("24," + hex64 + ",5,zeros," + std::string(48, 'a')));
  std::stringstream in("# comment\n\n24," + hex64 + ",5,zeros\n");
  try {
    read_records(in);
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

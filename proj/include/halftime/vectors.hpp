#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "halftime/seed.hpp"

namespace halftime::vectors {

/// One line of a vector file:
///   variant,master_hex(64),length,generator,digest_hex
/// Generators are `zeros` or `splitmix:<16 hex digits>` (little-endian bytes
/// of the splitmix64 stream started at that state).
struct VectorRecord {
  std::size_t variant = 24;
  MasterSeed master{};
  std::uint64_t length = 0;
  std::string generator = "zeros";
  std::string digest_hex;

  bool operator==(const VectorRecord&) const = default;
};

std::vector<std::uint8_t> generate_input(std::string_view generator, std::uint64_t length);

/// Hashes the record's input and returns the lowercase hex digest.
std::string compute_digest(const VectorRecord& record);

std::string format_record(const VectorRecord& record);

/// Throws UsageError on malformed lines.
VectorRecord parse_record(std::string_view line);

/// Every variant × the standard lengths × two master seeds, digests filled in.
std::vector<VectorRecord> standard_grid();

/// Lengths for one variant: 0, 1, 167·8, 168·8, 1 KiB, 1 MiB ± 1, 4 MiB, and
/// the byte lengths of one EHC instance ± one word.
std::vector<std::uint64_t> grid_lengths(std::size_t variant);

void write_records(std::ostream& out, const std::vector<VectorRecord>& records);

/// Skips blank lines and lines starting with '#'.
std::vector<VectorRecord> read_records(std::istream& in);

struct Mismatch {
  std::size_t line = 0;
  VectorRecord record;
  std::string actual;
};

std::vector<Mismatch> check_records(const std::vector<VectorRecord>& records);

}  // namespace halftime::vectors

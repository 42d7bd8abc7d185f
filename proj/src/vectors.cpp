#include "halftime/vectors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "halftime/errors.hpp"
#include "halftime/hasher.hpp"
#include "halftime/params.hpp"

namespace halftime::vectors {

namespace {

constexpr std::string_view kSplitmix = "splitmix:";
constexpr std::string_view kDefaultGenerator = "splitmix:243f6a8885a308d3";
// Bytes 00..1f would fold to the zero state, so the second master is
// taken from the hex digits of pi instead.
constexpr std::string_view kSecondMaster = "243f6a8885a308d313198a2e03707344a4093822299f31d0082efa98ec4e6c89";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, int base) {
  if (s.empty()) throw UsageError("empty number in vector record");
  std::uint64_t v = 0;
  for (char c : s) {
    unsigned digit;
    if (c >= '0' && c <= '9') digit = static_cast<unsigned>(c - '0');
    else if (base == 16 && c >= 'a' && c <= 'f') digit = static_cast<unsigned>(c - 'a' + 10);
    else throw UsageError("bad digit '" + std::string(1, c) + "' in vector record");
    v = v * static_cast<std::uint64_t>(base) + digit;
  }
  return v;
}

}  // namespace

std::vector<std::uint8_t> generate_input(std::string_view generator, std::uint64_t length) {
  std::vector<std::uint8_t> out(length, 0);
  if (generator == "zeros") return out;
  if (generator.substr(0, kSplitmix.size()) != kSplitmix || generator.size() != kSplitmix.size() + 16) {
    throw UsageError("unknown input generator '" + std::string(generator) + "'");
  }
  SplitMix64 rng(parse_u64(generator.substr(kSplitmix.size()), 16));
  for (std::uint64_t i = 0; i < length; i += 8) {
    const std::uint64_t v = rng();
    for (std::uint64_t j = 0; j < 8 && i + j < length; ++j) out[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
  }
  return out;
}

std::string compute_digest(const VectorRecord& record) {
  const auto params = variant(record.variant);
  const auto input = generate_input(record.generator, record.length);
  return hash(input, record.master, params).hex();
}

std::string format_record(const VectorRecord& r) {
  return std::to_string(r.variant) + ',' + master_hex(r.master) + ',' + std::to_string(r.length) + ',' +
         r.generator + ',' + r.digest_hex;
}

VectorRecord parse_record(std::string_view line) {
  const auto fields = split(line, ',');
  if (fields.size() != 5) throw UsageError("vector record needs 5 comma-separated fields");
  VectorRecord r;
  r.variant = static_cast<std::size_t>(parse_u64(fields[0], 10));
  r.master = parse_master_hex(fields[1]);
  r.length = parse_u64(fields[2], 10);
  r.generator = std::string(fields[3]);
  r.digest_hex = std::string(fields[4]);
  const auto expected_hex = 16 * (r.variant / 8);
  if (r.digest_hex.size() != expected_hex ||
      !std::all_of(r.digest_hex.begin(), r.digest_hex.end(),
                   [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); })) {
    throw UsageError("digest must be " + std::to_string(expected_hex) + " lowercase hex digits");
  }
  return r;
}

std::vector<std::uint64_t> grid_lengths(std::size_t variant_bytes) {
  const auto params = variant(variant_bytes);
  const std::uint64_t instance = params.instance_bytes();
  std::vector<std::uint64_t> lengths = {0,           1,           167 * 8,         168 * 8,          1024,
                                        (1u << 20) - 1, 1u << 20, (1u << 20) + 1, 4u << 20,
                                        instance - 8, instance,    instance + 8};
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  return lengths;
}

std::vector<VectorRecord> standard_grid() {
  const MasterSeed masters[] = {MasterSeed{}, parse_master_hex(kSecondMaster)};

  std::vector<VectorRecord> records;
  for (auto width : kVariantWidths) {
    for (auto length : grid_lengths(width)) {
      for (const auto& master : masters) {
        VectorRecord r;
        r.variant = width;
        r.master = master;
        r.length = length;
        r.generator = std::string(kDefaultGenerator);
        r.digest_hex = compute_digest(r);
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

void write_records(std::ostream& out, const std::vector<VectorRecord>& records) {
  out << "# variant,master_hex,length,generator,digest_hex\n";
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::vector<VectorRecord> read_records(std::istream& in) {
  std::vector<VectorRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      records.push_back(parse_record(line));
    } catch (const UsageError& err) {
      throw UsageError("line " + std::to_string(number) + ": " + err.what());
    }
  }
  return records;
}

std::vector<Mismatch> check_records(const std::vector<VectorRecord>& records) {
  std::vector<Mismatch> bad;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto actual = compute_digest(records[i]);
    if (actual != records[i].digest_hex) bad.push_back({i + 1, records[i], actual});
  }
  return bad;
}

}  // namespace halftime::vectors

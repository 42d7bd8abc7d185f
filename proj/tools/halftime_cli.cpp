#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define HALFTIME_HAVE_RDTSC 1
#endif

#include <CLI11.hpp>

#include "halftime/analysis.hpp"
#include "halftime/errors.hpp"
#include "halftime/hasher.hpp"
#include "halftime/params.hpp"
#include "halftime/seed.hpp"
#include "halftime/vectors.hpp"
#include "halftime/verify.hpp"

namespace {

using namespace halftime;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

std::uint64_t parse_length(const std::string& text) {
  if (text.empty()) throw UsageError("empty length");
  std::size_t digits = 0;
  while (digits < text.size() && text[digits] >= '0' && text[digits] <= '9') ++digits;
  if (digits == 0) throw UsageError("length must start with a number: " + text);
  unsigned shift = 0;
  if (digits < text.size()) {
    if (digits + 1 != text.size()) throw UsageError("bad length suffix: " + text);
    const std::string suffixes = "KMGTPE";
    const auto at = suffixes.find(static_cast<char>(std::toupper(static_cast<unsigned char>(text[digits]))));
    if (at == std::string::npos) throw UsageError("bad length suffix: " + text);
    shift = static_cast<unsigned>(10 * (at + 1));
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    const std::uint64_t digit = static_cast<std::uint64_t>(text[i] - '0');
    if (value > (UINT64_MAX - digit) / 10) throw UsageError("length too large: " + text);
    value = value * 10 + digit;
  }
  if (shift && value > (UINT64_MAX >> shift)) throw UsageError("length too large: " + text);
  return value << shift;
}

std::vector<std::uint8_t> read_all(std::istream& in) {
  std::vector<std::uint8_t> out;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    out.insert(out.end(), buf, buf + in.gcount());
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  auto bytes = read_all(in);
  if (in.bad()) throw UsageError("error reading " + path);
  return bytes;
}

MasterSeed load_seed_file(const std::string& path) {
  const auto bytes = read_file(path);
  if (bytes.size() == 32) {
    MasterSeed master{};
    std::copy(bytes.begin(), bytes.end(), master.begin());
    return master;
  }
  std::string text(bytes.begin(), bytes.end());
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
  return parse_master_hex(text);
}

struct HashArgs {
  std::size_t variant = 24;
  std::string seed_hex;
  std::string seed_file;
  std::string max_length;
  std::string input;
};

int cmd_hash(const HashArgs& args) {
  if (!args.seed_hex.empty() && !args.seed_file.empty()) throw UsageError("give --seed-hex or --seed-file, not both");
  MasterSeed master{};
  if (!args.seed_hex.empty()) master = parse_master_hex(args.seed_hex);
  if (!args.seed_file.empty()) master = load_seed_file(args.seed_file);

  const auto params = variant(args.variant);
  std::vector<std::uint8_t> input;
  if (args.input.empty() || args.input == "-") {
    input = read_all(std::cin);
    if (std::cin.bad()) throw UsageError("error reading standard input");
  } else {
    input = read_file(args.input);
  }

  std::uint64_t expand_for = input.size();
  if (!args.max_length.empty()) {
    expand_for = parse_length(args.max_length);
    if (expand_for < input.size()) throw UsageError("input is longer than --max-length");
  }
  const auto seed = expand_seed(master, SeedLayout::for_length(params, expand_for).total());
  std::cout << hash(input, seed, params).hex() << '\n';
  return kOk;
}

int cmd_analyze(std::size_t width, const std::string& length, bool csv) {
  const std::uint64_t n = parse_length(length);
  if (n == 0) throw UsageError("length must be positive");
  const auto report = analysis::entropy_report(variant(width), n);
  if (csv) {
    std::cout << analysis::csv_header() << '\n' << analysis::format_csv(report) << '\n';
  } else {
    std::cout << analysis::format_table(report);
  }
  return kOk;
}

int cmd_verify(bool quick, const std::string& inject) {
  verify::Options options;
  options.quick = quick;
  options.fault = verify::parse_fault(inject);
  const auto checks = verify::run(options);
  std::cout << verify::format_checks(checks);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.passed) {
      ++failed;
      std::cerr << "failed: " << c.property << ": " << c.measured << '\n';
    }
  }
  std::cout << (failed ? "FAIL" : "PASS") << ' ' << checks.size() - failed << '/' << checks.size() << '\n';
  return failed ? kCheckFailed : kOk;
}

std::uint64_t cycles() {
#ifdef HALFTIME_HAVE_RDTSC
  return __rdtsc();
#else
  return 0;
#endif
}

template <typename T>
T median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int cmd_bench(const std::string& sizes_arg, int reps) {
  if (reps < 1) throw UsageError("--reps must be at least 1");
  std::vector<std::uint64_t> sizes;
  std::stringstream list(sizes_arg);
  for (std::string item; std::getline(list, item, ',');) {
    const auto n = parse_length(item);
    if (n == 0) throw UsageError("sizes must be positive");
    sizes.push_back(n);
  }
  if (sizes.empty()) throw UsageError("--sizes is empty");

  std::cout << "size_bytes,variant,bytes_per_second,bytes_per_cycle\n";
  MasterSeed master{};
  for (std::size_t i = 0; i < master.size(); ++i) master[i] = static_cast<std::uint8_t>(i);
  for (auto width : kVariantWidths) {
    const auto params = variant(width);
    for (auto n : sizes) {
      const auto input = vectors::generate_input("splitmix:243f6a8885a308d3", n);
      const auto seed = expand_seed(master, SeedLayout::for_length(params, n).total());
      // Enough calls per rep for the clock to resolve small inputs.
      const std::uint64_t calls = std::max<std::uint64_t>(1, (1u << 22) / n);
      std::vector<double> seconds, cyc;
      volatile std::uint64_t sink = 0;
      for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto c0 = cycles();
        for (std::uint64_t c = 0; c < calls; ++c) sink = sink + hash(input, seed, params).words()[0];
        const auto c1 = cycles();
        const auto t1 = std::chrono::steady_clock::now();
        seconds.push_back(std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(calls));
        cyc.push_back(static_cast<double>(c1 - c0) / static_cast<double>(calls));
      }
      const double s = median(seconds);
      const double c = median(cyc);
      std::cout << n << ',' << width << ',' << (s > 0 ? static_cast<double>(n) / s : 0.0) << ',';
      if (c > 0) std::cout << static_cast<double>(n) / c;
      std::cout << '\n';
    }
  }
  return kOk;
}

int cmd_vectors(const std::string& emit, const std::string& check) {
  if (emit.empty() == check.empty()) throw UsageError("give exactly one of --emit or --check");
  if (!emit.empty()) {
    std::ofstream out(emit);
    if (!out) throw UsageError("cannot write " + emit);
    vectors::write_records(out, vectors::standard_grid());
    if (!out) throw UsageError("error writing " + emit);
    return kOk;
  }
  std::ifstream in(check);
  if (!in) throw UsageError("cannot read " + check);
  const auto records = vectors::read_records(in);
  const auto bad = vectors::check_records(records);
  for (const auto& m : bad) {
    std::cout << "mismatch record " << m.line << ": " << vectors::format_record(m.record) << " got " << m.actual
              << '\n';
  }
  std::cout << records.size() - bad.size() << '/' << records.size() << " records match\n";
  return bad.empty() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HalftimeHash: hashing, analysis, verification, vectors and benchmarks"};
  app.require_subcommand(1);
  const auto widths = CLI::IsMember(std::vector<std::size_t>(kVariantWidths.begin(), kVariantWidths.end()));

  HashArgs hash_args;
  auto* hash_cmd = app.add_subcommand("hash", "Hash a file or standard input");
  hash_cmd->add_option("--variant", hash_args.variant, "Output bytes")->check(widths);
  hash_cmd->add_option("--seed-hex", hash_args.seed_hex, "Master seed, 64 hex digits");
  hash_cmd->add_option("--seed-file", hash_args.seed_file, "File holding 32 raw bytes or 64 hex digits");
  hash_cmd->add_option("--max-length", hash_args.max_length, "Expand the seed for inputs up to this length");
  hash_cmd->add_option("input", hash_args.input, "Input path, or - for standard input");

  std::size_t analyze_variant = 24;
  std::string analyze_length;
  bool analyze_csv = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Seed size, entropy and multiplication counts");
  analyze_cmd->add_option("--variant", analyze_variant, "Output bytes")->check(widths);
  analyze_cmd->add_option("--length", analyze_length, "Input length, suffixes K/M/G/T/P/E")->required();
  analyze_cmd->add_flag("--csv", analyze_csv, "Comma-separated output");

  bool quick = false;
  std::string inject;
  auto* verify_cmd = app.add_subcommand("verify", "Check matrices, codes and small-width A∆U bounds");
  verify_cmd->add_flag("--quick", quick, "Smaller enumerations and fewer trials");
  verify_cmd->add_option("--inject", inject, "Deliberate fault")->check(CLI::IsMember({"singular-matrix", "weak-code"}));

  std::string sizes = "1K,256K,1M";
  int reps = 5;
  auto* bench_cmd = app.add_subcommand("bench", "Throughput CSV");
  bench_cmd->add_option("--sizes", sizes, "Comma-separated sizes");
  bench_cmd->add_option("--reps", reps, "Repetitions per size (median reported)");

  std::string emit, check;
  auto* vectors_cmd = app.add_subcommand("vectors", "Emit or check golden vectors");
  vectors_cmd->add_option("--emit", emit, "Write the standard grid");
  vectors_cmd->add_option("--check", check, "Recompute and compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*hash_cmd) return cmd_hash(hash_args);
    if (*analyze_cmd) return cmd_analyze(analyze_variant, analyze_length, analyze_csv);
    if (*verify_cmd) return cmd_verify(quick, inject);
    if (*bench_cmd) return cmd_bench(sizes, reps);
    if (*vectors_cmd) return cmd_vectors(emit, check);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

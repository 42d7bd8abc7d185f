#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halftime/params.hpp"

namespace halftime::verify {

enum class Fault { none, singular_matrix, weak_code };

/// Throws UsageError for unknown names. Accepts "singular-matrix" and "weak-code".
Fault parse_fault(const std::string& name);

struct Options {
  bool quick = false;
  Fault fault = Fault::none;
  std::uint64_t rng_seed = 0x5eed;
};

struct Check {
  std::string property;
  bool passed = false;
  std::string bound;
  std::string measured;
};

/// Parameter set for one width, with the requested fault applied: a copy of
/// column 0 over column 1 of T, or a code whose parity rows repeat.
HashParams faulty_variant(std::size_t output_bytes, Fault fault);

/// Matrix valuations and subset determinants, code distances, NH and EHC
/// A∆U enumerations at 4-bit halves, and a tree collision estimate.
std::vector<Check> run(const Options& options);

std::string format_checks(const std::vector<Check>& checks);

}  // namespace halftime::verify

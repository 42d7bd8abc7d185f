#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "halftime/params.hpp"

namespace halftime::analysis {

/// Exact integer determinant by fraction-free (Bareiss) elimination.
std::int64_t bareiss_determinant(TransformMatrix m);

/// Exponent of the largest power of two dividing a nonzero integer.
int two_adic_valuation(std::int64_t nonzero);

struct ValuationReport {
  int p = 0;
  std::size_t subsets = 0;
  std::vector<Eigen::Index> worst_columns;  // one subset attaining p
};

/// Visits every k-column subset of `t`, checks its determinant is nonzero and
/// returns the largest 2-adic valuation among them. A singular subset throws
/// ValidationError naming the columns.
ValuationReport valuation_report(const TransformMatrix& t, std::size_t k);

inline int max_two_adic_valuation(const TransformMatrix& t, std::size_t k) { return valuation_report(t, k).p; }

struct DistanceReport {
  std::size_t declared = 0;
  std::size_t exhaustive = 0;   // min weight over all nonzero reduced-width inputs
  std::size_t random = 0;       // min weight seen in full-width random trials
  std::uint64_t patterns = 0;   // reduced-width inputs enumerated
  std::uint64_t trials = 0;

  std::size_t measured() const { return exhaustive < random ? exhaustive : random; }
  bool accepted() const { return measured() >= declared; }
};

/// Minimum symbol (item) distance of a linear code. Enumerates every nonzero
/// input of d items whose w words are truncated to `word_bits` bits (requires
/// d·w·word_bits ≤ 28), then runs `random_trials` low-weight 64-bit
/// differences through the same encoder.
DistanceReport verify_min_distance(const ErasureCode& code, unsigned word_bits,
                                   std::uint64_t random_trials = 1'000'000, std::uint64_t rng_seed = 0x5eed);

/// Throws ValidationError (with the measured distance) unless the code
/// reaches its declared distance.
void require_min_distance(const ErasureCode& code, unsigned word_bits, std::uint64_t random_trials = 1'000'000);

struct SeedTerms {
  std::uint64_t ehc = 0;
  std::uint64_t tree = 0;
  std::uint64_t finalize = 0;
  std::uint64_t remainder = 0;

  std::uint64_t total() const { return ehc + tree + finalize + remainder; }
};

struct MultiplicationCount {
  std::uint64_t ehc = 0;
  std::uint64_t tree = 0;
  std::uint64_t finalize = 0;
  std::uint64_t remainder = 0;

  std::uint64_t total() const { return ehc + tree + finalize + remainder; }
};

struct EntropyReport {
  std::size_t output_bytes = 0;
  std::uint64_t n_bytes = 0;
  std::uint64_t instances = 0;
  std::size_t h = 0;             // ceiling reading, used for everything below
  std::size_t h_floor = 0;       // floor reading, for comparison
  double epsilon_log2 = 0;       // −lg ε
  double epsilon_log2_floor = 0;
  SeedTerms seed;
  std::uint64_t seed_words = 0;
  std::uint64_t seed_bytes = 0;
  std::uint64_t seed_words_floor = 0;
  std::uint64_t multiplications_leading = 0;  // (e·w + k)·b·⌊N/(b·d·w)⌋
  std::int64_t multiplications_log_term = 0; // exact − leading
  MultiplicationCount multiplications;
  double ehc_share = 0;
};

/// −lg(2^{−32k}(2^{kp} + h^k + 1)).
double epsilon_log2(std::size_t k, int p, std::size_t h);

/// Seed budget by term, for a tree height h. The finalize term uses max(h, 1).
SeedTerms seed_terms(const HashParams& params, std::size_t h);

/// Total 64-bit seed words the hasher needs for an n-byte input.
std::uint64_t seed_words(const HashParams& params, std::uint64_t n_bytes);

/// Multiplications performed by the hasher on an n-byte input, counted from
/// the structure of the computation.
MultiplicationCount multiplication_count(const HashParams& params, std::uint64_t n_bytes);

EntropyReport entropy_report(const HashParams& params, std::uint64_t n_bytes);

/// Output-entropy bits k·(width − p) guaranteed by the EHC stage with
/// `half_bits`-wide NH halves.
inline double ehc_bound(std::size_t k, int p, unsigned half_bits) {
  return static_cast<double>(k) * (static_cast<double>(half_bits) - p);
}
inline double ehc_bound(const HashParams& params, unsigned half_bits) { return ehc_bound(params.k, params.p, half_bits); }

std::string format_table(const EntropyReport& report);
std::string csv_header();
std::string format_csv(const EntropyReport& report);

}  // namespace halftime::analysis

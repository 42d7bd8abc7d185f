#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "halftime/nh.hpp"
#include "halftime/params.hpp"
#include "halftime/seed.hpp"

namespace halftime {

/// k 64-bit words, serialized little-endian into 8k bytes.
class Digest {
 public:
  Digest() = default;
  explicit Digest(std::vector<std::uint64_t> words) : words_(std::move(words)) {}

  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t size_bytes() const { return 8 * words_.size(); }
  std::vector<std::uint8_t> bytes() const;
  std::string hex() const;

  bool operator==(const Digest&) const = default;

 private:
  std::vector<std::uint64_t> words_;
};

/// Multiplications per stage of one reference-path hash.
struct StageTally {
  MulTally ehc;
  MulTally tree;
  MulTally finalize;
  MulTally remainder;

  std::uint64_t total() const { return ehc.count + tree.count + finalize.count + remainder.count; }
};

/// Little-endian 64-bit words; a trailing partial word is zero-padded.
std::vector<std::uint64_t> load_words_le(std::span<const std::uint8_t> bytes);

/// Toeplitz-keyed NH over input that never filled an EHC instance. Component
/// i is nh_words(tail, r[i, |tail|+i)), so the k key windows share all but
/// k−1 words. Requires |r| ≥ |tail| + k − 1.
std::vector<std::uint64_t> hash_remainder(std::span<const std::uint64_t> tail, std::span<const std::uint64_t> r,
                                          std::size_t k, MulTally* tally = nullptr);

/// Straightforward evaluation on Eigen block arrays, any (b, f). Fills
/// `tally` with per-stage multiplication counts when given.
Digest hash_reference(std::span<const std::uint8_t> input, const SeedBuffer& seed, const HashParams& params,
                      StageTally* tally = nullptr);

/// True when the fixed 8-lane path can run these parameters.
bool lanes_supported(const HashParams& params);

/// Fixed-geometry path (b = f = 8) over plain 8-word lane arrays. Produces
/// the same digest as hash_reference.
Digest hash_lanes(std::span<const std::uint8_t> input, const SeedBuffer& seed, const HashParams& params);

/// Picks the lane path when supported, otherwise the reference path.
/// Throws SizingError if `seed` is shorter than SeedLayout::for_length(...).total().
Digest hash(std::span<const std::uint8_t> input, const SeedBuffer& seed, const HashParams& params);

/// Expands exactly as much key material as `input` needs, then hashes.
Digest hash(std::span<const std::uint8_t> input, const MasterSeed& master, const HashParams& params);

}  // namespace halftime

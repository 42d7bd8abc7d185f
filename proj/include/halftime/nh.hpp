#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>

#include <Eigen/Core>

#include "halftime/errors.hpp"
#include "halftime/params.hpp"

namespace halftime {

/// Counts half-word multiplications. Passed as an optional out-parameter by
/// the reference path; the lane path never counts.
struct MulTally {
  std::uint64_t count = 0;
};

/// Width traits for a full word of type `Word`. The production form is
/// uint64_t (32-bit halves); uint8_t and uint16_t give the 4- and 8-bit half
/// widths used for exhaustive checking. Half-words are packed little-endian:
/// the low half is the even index.
template <typename Word>
struct NhWidth {
  static_assert(std::is_unsigned_v<Word>);
  static constexpr unsigned full_bits = std::numeric_limits<Word>::digits;
  static constexpr unsigned half_bits = full_bits / 2;
  static constexpr Word half_mask = static_cast<Word>((Word{1} << half_bits) - 1);

  static constexpr Word lo(Word x) { return static_cast<Word>(x & half_mask); }
  static constexpr Word hi(Word x) { return static_cast<Word>(x >> half_bits); }
  static constexpr Word pack(Word low, Word high) {
    return static_cast<Word>(lo(low) | detail::shl(lo(high), half_bits));
  }
  static constexpr Word add_half(Word a, Word b) { return lo(detail::add(a, b)); }

  /// (lo(x)+lo(s) mod 2^half) · (hi(x)+hi(s) mod 2^half), full-width product.
  static constexpr Word pair(Word x, Word s) {
    return detail::mul(add_half(lo(x), lo(s)), add_half(hi(x), hi(s)));
  }
};

/// Σ (d₂ᵢ+s₂ᵢ)(d₂ᵢ₊₁+s₂ᵢ₊₁) over a sequence of half-words. Each element of
/// `halves` and `seed` is taken modulo 2^half.
template <typename Word>
Word nh_full(std::span<const Word> halves, std::span<const Word> seed, MulTally* tally = nullptr) {
  using W = NhWidth<Word>;
  if (halves.size() % 2 != 0) throw UsageError("NH input must have an even number of half-words");
  if (seed.size() < halves.size()) throw UsageError("NH seed shorter than input");
  Word sum{0};
  for (std::size_t i = 0; i < halves.size(); i += 2) {
    sum = detail::add(sum, detail::mul(W::add_half(halves[i], seed[i]),
                                       W::add_half(halves[i + 1], seed[i + 1])));
  }
  if (tally) tally->count += halves.size() / 2;
  return sum;
}

/// Tree-node form: the final pair is added as d₂ₘ + 2^half·d₂ₘ₊₁ instead of
/// being multiplied. The seed needs only |halves| − 2 elements.
template <typename Word>
Word nh_tree_node(std::span<const Word> halves, std::span<const Word> seed, MulTally* tally = nullptr) {
  using W = NhWidth<Word>;
  if (halves.size() % 2 != 0 || halves.empty()) {
    throw UsageError("NH tree node needs a nonempty, even number of half-words");
  }
  const std::size_t hashed = halves.size() - 2;
  Word sum = nh_full(halves.first(hashed), seed.first(std::min(seed.size(), hashed)), tally);
  return detail::add(sum, W::pack(halves[hashed], halves[hashed + 1]));
}

/// nh_full over packed words: word i contributes the pair (lo, hi).
template <typename Word>
Word nh_words(std::span<const Word> words, std::span<const Word> seed, MulTally* tally = nullptr) {
  if (seed.size() < words.size()) throw UsageError("NH seed shorter than input");
  Word sum{0};
  for (std::size_t i = 0; i < words.size(); ++i) sum = detail::add(sum, NhWidth<Word>::pair(words[i], seed[i]));
  if (tally) tally->count += words.size();
  return sum;
}

/// nh_tree_node over packed words: the last word is added unhashed.
template <typename Word>
Word nh_node_words(std::span<const Word> words, std::span<const Word> seed, MulTally* tally = nullptr) {
  if (words.empty()) throw UsageError("NH tree node needs at least one word");
  const std::size_t hashed = words.size() - 1;
  return detail::add(nh_words(words.first(hashed), seed.first(std::min(seed.size(), hashed)), tally),
                     words.back());
}

template <typename Word>
using Block = Eigen::Array<Word, Eigen::Dynamic, 1>;

/// Lanes × blocks; column j is one block (b contiguous words).
template <typename Word>
using Blocks = Eigen::Array<Word, Eigen::Dynamic, Eigen::Dynamic>;

/// Applies nh_node_words lane by lane to `fanout` blocks (the columns of
/// `blocks`), sharing the fanout − 1 seed words across all lanes.
template <typename Derived>
Block<typename Derived::Scalar> nh_blockwise(const Eigen::ArrayBase<Derived>& blocks,
                                             std::span<const typename Derived::Scalar> seed,
                                             std::size_t fanout, MulTally* tally = nullptr) {
  using Word = typename Derived::Scalar;
  if (fanout < 1 || static_cast<std::size_t>(blocks.cols()) != fanout) {
    throw UsageError("nh_blockwise expects exactly fanout blocks");
  }
  if (seed.size() < fanout - 1) throw UsageError("nh_blockwise seed shorter than fanout - 1");
  Block<Word> out = blocks.col(fanout - 1);
  for (std::size_t i = 0; i + 1 < fanout; ++i) {
    const Word s = seed[i];
    out = out.binaryExpr(blocks.col(i), [s](Word acc, Word x) {
      return detail::add(acc, NhWidth<Word>::pair(x, s));
    });
  }
  if (tally) tally->count += (fanout - 1) * static_cast<std::size_t>(blocks.rows());
  return out;
}

}  // namespace halftime

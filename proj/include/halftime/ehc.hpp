#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "halftime/errors.hpp"
#include "halftime/nh.hpp"
#include "halftime/params.hpp"

namespace halftime {

// An EHC instance is held as a lanes × (items·w) array. Column i·w + c is
// block c of item i. The input instance maps directly onto the raw word
// stream because each block is b contiguous words.

/// Systematic encoding: d items in, e items out. Parity items are XORs of
/// input words selected by the code's binary mixing matrices.
template <typename Derived>
Blocks<typename Derived::Scalar> encode(const Eigen::ArrayBase<Derived>& items, const ErasureCode& code) {
  using Word = typename Derived::Scalar;
  const auto w = static_cast<Eigen::Index>(code.item_words());
  const auto d = static_cast<Eigen::Index>(code.arity_in());
  const auto e = static_cast<Eigen::Index>(code.arity_out());
  if (items.cols() != d * w) throw UsageError("encode expects exactly d items of w blocks");

  Blocks<Word> out = Blocks<Word>::Zero(items.rows(), e * w);
  out.leftCols(d * w) = items;
  for (Eigen::Index j = 0; j < e - d; ++j) {
    for (Eigen::Index r = 0; r < w; ++r) {
      auto sink = out.col((d + j) * w + r);
      for (Eigen::Index i = 0; i < d; ++i) {
        const std::uint32_t m = code.mask(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                          static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < w; ++c) {
          if ((m >> c) & 1u) sink = sink.binaryExpr(items.col(i * w + c), std::bit_xor<Word>());
        }
      }
    }
  }
  return out;
}

/// Hashes each encoded item to one block: lane j of item i is nh_words over
/// the item's w words at lane j, keyed by entropy[i·w, (i+1)·w).
template <typename Derived>
Blocks<typename Derived::Scalar> hash_encoded(const Eigen::ArrayBase<Derived>& encoded,
                                              std::span<const typename Derived::Scalar> entropy,
                                              std::size_t w, MulTally* tally = nullptr) {
  using Word = typename Derived::Scalar;
  if (w == 0 || encoded.cols() % static_cast<Eigen::Index>(w) != 0) {
    throw UsageError("encoded instance is not a whole number of items");
  }
  const auto items = encoded.cols() / static_cast<Eigen::Index>(w);
  if (entropy.size() < static_cast<std::size_t>(items) * w) throw SizingError("EHC entropy region too small");

  Blocks<Word> out = Blocks<Word>::Zero(encoded.rows(), items);
  for (Eigen::Index i = 0; i < items; ++i) {
    auto acc = out.col(i);
    for (std::size_t c = 0; c < w; ++c) {
      const Word s = entropy[static_cast<std::size_t>(i) * w + c];
      acc = acc.binaryExpr(encoded.col(i * static_cast<Eigen::Index>(w) + static_cast<Eigen::Index>(c)),
                           [s](Word a, Word x) { return detail::add(a, NhWidth<Word>::pair(x, s)); });
    }
  }
  if (tally) tally->count += static_cast<std::uint64_t>(items) * w * static_cast<std::uint64_t>(encoded.rows());
  return out;
}

/// Output column r = Σ_c T(r,c)·hashed column c, with each coefficient
/// applied by coefficient_multiply.
template <typename Derived>
Blocks<typename Derived::Scalar> combine(const Eigen::ArrayBase<Derived>& hashed, const TransformMatrix& t) {
  using Word = typename Derived::Scalar;
  if (hashed.cols() != t.cols()) throw UsageError("combine expects one hashed block per matrix column");
  Blocks<Word> out = Blocks<Word>::Zero(hashed.rows(), t.rows());
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      const std::int64_t coeff = t(r, c);
      if (coeff == 0) continue;
      out.col(r) = out.col(r).binaryExpr(hashed.col(c), [coeff](Word acc, Word x) {
        return detail::add(acc, coefficient_multiply(coeff, x));
      });
    }
  }
  return out;
}

/// encode → hash_encoded → combine. Returns lanes × k.
template <typename Derived>
Blocks<typename Derived::Scalar> ehc(const Eigen::ArrayBase<Derived>& items,
                                     std::span<const typename Derived::Scalar> entropy,
                                     const ErasureCode& code, const TransformMatrix& t,
                                     MulTally* tally = nullptr) {
  return combine(hash_encoded(encode(items, code), entropy, code.item_words(), tally), t);
}

template <typename Derived>
Blocks<typename Derived::Scalar> ehc(const Eigen::ArrayBase<Derived>& items,
                                     std::span<const typename Derived::Scalar> entropy,
                                     const HashParams& params, MulTally* tally = nullptr) {
  return ehc(items, entropy, params.code, params.transform, tally);
}

}  // namespace halftime

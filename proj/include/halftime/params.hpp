#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "halftime/errors.hpp"

namespace halftime {

/// k×e combine matrix. Entries are small nonnegative integers chosen so that
/// multiplying by them costs at most two shifts and one add or subtract.
using TransformMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Systematic, bitwise-linear erasure code over items of `w` words.
///
/// The first `d` encoded items are the inputs. Parity item `j` is the XOR over
/// inputs `i` of M(i,j)·item_i, where M(i,j) is a w×w binary matrix acting on
/// the item's w words (row r of M selects which input words are XORed into
/// output word r). No shifts are involved, so every bit position of a word is
/// an independent copy of the same code: the distance of the full-width code
/// equals the distance of its one-bit-per-word reduction.
class ErasureCode {
 public:
  enum class Kind { xor_parity, linear };

  /// Append the XOR of all `d` items (distance 2). With d = 1 this is the
  /// repetition code.
  static ErasureCode xor_parity(std::size_t d, std::size_t w);

  /// Code over GF(8) = GF(2)[t]/(t^3+t+1) acting on 3-word items (word c holds
  /// the t^c coefficient, bitsliced). `coefficients[i][j]` is the GF(8) element
  /// multiplying input i into parity item j; 0 is allowed.
  static ErasureCode gf8(const std::vector<std::vector<std::uint8_t>>& coefficients,
                         std::size_t declared_distance);

  /// Fully explicit form: masks[(i * parity + j) * w + r] is row r of M(i,j).
  static ErasureCode from_masks(std::size_t d, std::size_t e, std::size_t w,
                                std::size_t declared_distance, std::vector<std::uint32_t> masks,
                                Kind kind = Kind::linear);

  Kind kind() const { return kind_; }
  std::size_t arity_in() const { return d_; }
  std::size_t arity_out() const { return e_; }
  std::size_t parity_items() const { return e_ - d_; }
  std::size_t item_words() const { return w_; }
  std::size_t min_distance() const { return k_; }

  /// Row `r` of the w×w binary matrix mixing input `i` into parity item `j`.
  std::uint32_t mask(std::size_t i, std::size_t j, std::size_t r) const {
    return masks_[(i * parity_items() + j) * w_ + r];
  }

 private:
  ErasureCode(Kind kind, std::size_t d, std::size_t e, std::size_t w, std::size_t k,
              std::vector<std::uint32_t> masks);

  Kind kind_;
  std::size_t d_;
  std::size_t e_;
  std::size_t w_;
  std::size_t k_;
  std::vector<std::uint32_t> masks_;
};

/// One output-width variant. `p` is stored as an exponent: the largest power
/// of two dividing any k-column determinant of `transform` is 2^p.
struct HashParams {
  std::size_t w;  // blocks per EHC item
  std::size_t d;  // items per instance before encoding
  std::size_t e;  // items per instance after encoding
  std::size_t k;  // combined output blocks, also the code distance
  std::size_t b;  // 64-bit words per block
  std::size_t f;  // tree fanout in blocks
  int p;
  std::size_t output_bytes;
  TransformMatrix transform;
  ErasureCode code;

  std::size_t instance_words() const { return b * d * w; }
  std::size_t instance_bytes() const { return 8 * instance_words(); }
};

/// The four published widths.
inline constexpr std::array<std::size_t, 4> kVariantWidths = {16, 24, 32, 40};

/// Throws ConfigurationError for anything but 16, 24, 32 or 40.
HashParams variant(std::size_t output_bytes);

/// Checks the structural invariants of a parameter set (dimensions agree,
/// d = e + 1 - k, coefficients are shift-add friendly). Does not check p.
void check_shape(const HashParams& params);

/// True for coefficients that `coefficient_multiply` can evaluate.
constexpr bool is_shift_add_coefficient(std::int64_t c) {
  switch (c) {
    case 0: case 1: case 2: case 3: case 4: case 5: case 7: case 8: case 9:
      return true;
    default:
      return false;
  }
}

namespace detail {
template <typename Word>
using Promoted = std::conditional_t<(sizeof(Word) < sizeof(unsigned)), unsigned, Word>;

template <typename Word>
constexpr Word shl(Word x, unsigned s) {
  return static_cast<Word>(static_cast<Promoted<Word>>(x) << s);
}
template <typename Word>
constexpr Word add(Word a, Word b) {
  return static_cast<Word>(static_cast<Promoted<Word>>(a) + static_cast<Promoted<Word>>(b));
}
template <typename Word>
constexpr Word sub(Word a, Word b) {
  return static_cast<Word>(static_cast<Promoted<Word>>(a) - static_cast<Promoted<Word>>(b));
}
template <typename Word>
constexpr Word mul(Word a, Word b) {
  return static_cast<Word>(static_cast<Promoted<Word>>(a) * static_cast<Promoted<Word>>(b));
}
}  // namespace detail

/// c·x mod 2^bits(Word) using shifts and at most one add or subtract.
template <typename Word>
constexpr Word coefficient_multiply(std::int64_t c, Word x) {
  static_assert(std::is_unsigned_v<Word>);
  using detail::add;
  using detail::shl;
  using detail::sub;
  switch (c) {
    case 0: return Word{0};
    case 1: return x;
    case 2: return shl(x, 1);
    case 3: return add(x, shl(x, 1));
    case 4: return shl(x, 2);
    case 5: return add(x, shl(x, 2));
    case 7: return sub(shl(x, 3), x);
    case 8: return shl(x, 3);
    case 9: return add(x, shl(x, 3));
    default:
      throw ConfigurationError("coefficient " + std::to_string(c) + " has no shift-add form");
  }
}

}  // namespace halftime

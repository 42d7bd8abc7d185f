#include "halftime/params.hpp"

#include <string>
#include <utility>

namespace halftime {

namespace {

// GF(8) with modulus t^3 + t + 1.
std::uint8_t gf8_multiply(std::uint8_t a, std::uint8_t b) {
  unsigned r = 0;
  for (unsigned i = 0; i < 3; ++i) {
    if ((b >> i) & 1u) r ^= static_cast<unsigned>(a) << i;
  }
  for (unsigned i = 4; i >= 3; --i) {
    if ((r >> i) & 1u) r ^= 0b1011u << (i - 3);
  }
  return static_cast<std::uint8_t>(r);
}

TransformMatrix matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  const auto e = static_cast<Eigen::Index>(rows.begin()->size());
  TransformMatrix t(k, e);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (auto v : row) t(r, c++) = v;
    ++r;
  }
  return t;
}

// Parity tables for the k = 3, 4, 5 codes. Each table is the redundancy part
// of a systematic MDS code over GF(8); every square submatrix is nonsingular.
// The distance of the binary expansion is re-checked by
// analysis::verify_min_distance before a variant is trusted.
const std::vector<std::vector<std::uint8_t>> kParity9x7 = {
    {1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}};
const std::vector<std::vector<std::uint8_t>> kParity10x7 = {
    {1, 1, 1}, {1, 2, 3}, {1, 3, 5}, {1, 4, 2}, {1, 5, 6}, {1, 6, 7}, {1, 7, 4}};
const std::vector<std::vector<std::uint8_t>> kParity9x5 = {
    {1, 1, 1, 1}, {1, 2, 3, 4}, {1, 5, 7, 3}, {1, 6, 4, 5}, {1, 7, 2, 6}};

}  // namespace

ErasureCode::ErasureCode(Kind kind, std::size_t d, std::size_t e, std::size_t w, std::size_t k,
                         std::vector<std::uint32_t> masks)
    : kind_(kind), d_(d), e_(e), w_(w), k_(k), masks_(std::move(masks)) {}

ErasureCode ErasureCode::xor_parity(std::size_t d, std::size_t w) {
  if (d == 0 || w == 0 || w > 32) throw ConfigurationError("xor parity needs d >= 1 and 1 <= w <= 32");
  std::vector<std::uint32_t> masks(d * w);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t r = 0; r < w; ++r) masks[i * w + r] = 1u << r;
  }
  return ErasureCode(Kind::xor_parity, d, d + 1, w, 2, std::move(masks));
}

ErasureCode ErasureCode::gf8(const std::vector<std::vector<std::uint8_t>>& coefficients,
                             std::size_t declared_distance) {
  constexpr std::size_t w = 3;
  if (coefficients.empty() || coefficients.front().empty()) {
    throw ConfigurationError("empty GF(8) parity table");
  }
  const std::size_t d = coefficients.size();
  const std::size_t parity = coefficients.front().size();
  std::vector<std::uint32_t> masks(d * parity * w, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (coefficients[i].size() != parity) throw ConfigurationError("ragged GF(8) parity table");
    for (std::size_t j = 0; j < parity; ++j) {
      const std::uint8_t a = coefficients[i][j];
      if (a > 7) throw ConfigurationError("GF(8) element out of range");
      // Column c of the multiplication matrix is a·t^c.
      for (std::size_t c = 0; c < w; ++c) {
        const std::uint8_t column = gf8_multiply(a, static_cast<std::uint8_t>(1u << c));
        for (std::size_t r = 0; r < w; ++r) {
          if ((column >> r) & 1u) masks[(i * parity + j) * w + r] |= 1u << c;
        }
      }
    }
  }
  return ErasureCode(Kind::linear, d, d + parity, w, declared_distance, std::move(masks));
}

ErasureCode ErasureCode::from_masks(std::size_t d, std::size_t e, std::size_t w,
                                    std::size_t declared_distance, std::vector<std::uint32_t> masks,
                                    Kind kind) {
  if (e < d || w == 0 || w > 32 || masks.size() != d * (e - d) * w) {
    throw ConfigurationError("erasure code masks do not match d, e, w");
  }
  return ErasureCode(kind, d, e, w, declared_distance, std::move(masks));
}

void check_shape(const HashParams& params) {
  const auto& t = params.transform;
  if (params.k < 1 || params.w < 1 || params.b < 1 || params.f < 2) {
    throw ConfigurationError("w, k, b must be positive and f at least 2");
  }
  if (static_cast<std::size_t>(t.rows()) != params.k || static_cast<std::size_t>(t.cols()) != params.e) {
    throw ConfigurationError("transform matrix must be k x e");
  }
  if (params.d + params.k != params.e + 1) throw ConfigurationError("d must equal e + 1 - k");
  if (params.code.arity_in() != params.d || params.code.arity_out() != params.e ||
      params.code.item_words() != params.w || params.code.min_distance() != params.k) {
    throw ConfigurationError("erasure code geometry does not match parameters");
  }
  if (params.output_bytes != 8 * params.k) throw ConfigurationError("output_bytes must be 8k");
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      if (!is_shift_add_coefficient(t(r, c))) {
        throw ConfigurationError("matrix entry " + std::to_string(t(r, c)) + " is not shift-add friendly");
      }
    }
  }
}

// Only (w, b, f) for the 24-byte variant are published. The other variants
// share b = f = 8; w is 2 for the 16-byte variant and 3 elsewhere. The
// analysis code takes these as inputs, so they can change without breaking
// any property check.
HashParams variant(std::size_t output_bytes) {
  HashParams p{.w = 0, .d = 0, .e = 0, .k = 0, .b = 8, .f = 8, .p = 0,
               .output_bytes = output_bytes, .transform = {},
               .code = ErasureCode::xor_parity(1, 1)};
  switch (output_bytes) {
    case 16:
      p.w = 2, p.d = 6, p.e = 7, p.k = 2, p.p = 2;
      p.transform = matrix({{1, 0, 1, 1, 2, 1, 4},
                            {0, 1, 1, 2, 1, 4, 1}});
      p.code = ErasureCode::xor_parity(6, 2);
      break;
    case 24:
      p.w = 3, p.d = 7, p.e = 9, p.k = 3, p.p = 2;
      p.transform = matrix({{0, 0, 1, 4, 1, 1, 2, 2, 1},
                            {1, 1, 0, 0, 1, 4, 1, 2, 2},
                            {1, 4, 1, 1, 0, 0, 2, 1, 2}});
      p.code = ErasureCode::gf8(kParity9x7, 3);
      break;
    case 32:
      p.w = 3, p.d = 7, p.e = 10, p.k = 4, p.p = 3;
      p.transform = matrix({{0, 0, 0, 1, 1, 4, 2, 4, 1, 1},
                            {0, 1, 2, 0, 0, 1, 1, 2, 4, 1},
                            {2, 0, 1, 0, 4, 0, 1, 1, 1, 1},
                            {1, 1, 0, 1, 0, 0, 4, 1, 2, 8}});
      p.code = ErasureCode::gf8(kParity10x7, 4);
      break;
    case 40:
      p.w = 3, p.d = 5, p.e = 9, p.k = 5, p.p = 3;
      p.transform = matrix({{1, 0, 0, 0, 0, 1, 1, 2, 4},
                            {0, 1, 0, 0, 0, 1, 2, 1, 7},
                            {0, 0, 1, 0, 0, 1, 3, 8, 5},
                            {0, 0, 0, 1, 0, 1, 4, 9, 8},
                            {0, 0, 0, 0, 1, 1, 5, 3, 9}});
      p.code = ErasureCode::gf8(kParity9x5, 5);
      break;
    default:
      throw ConfigurationError("unsupported output width " + std::to_string(output_bytes) +
                               " (expected 16, 24, 32 or 40)");
  }
  check_shape(p);
  return p;
}

}  // namespace halftime

#include "halftime/hasher.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>

#include "halftime/ehc.hpp"
#include "halftime/errors.hpp"
#include "halftime/tree.hpp"

namespace halftime {

namespace {

std::uint64_t load_le64(const std::uint8_t* p) {
  std::uint64_t v;
  std::memcpy(&v, p, sizeof v);
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
  return v;
}

// Partial trailing word, zero-padded.
std::uint64_t load_le64_partial(const std::uint8_t* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void require_seed(const SeedBuffer& seed, const SeedLayout& layout) {
  if (seed.size() < layout.total()) {
    throw SizingError("seed buffer holds " + std::to_string(seed.size()) + " words but " +
                      std::to_string(layout.n_bytes) + " input bytes need " + std::to_string(layout.total()));
  }
}

}  // namespace

std::vector<std::uint8_t> Digest::bytes() const {
  std::vector<std::uint8_t> out(size_bytes());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::size_t j = 0; j < 8; ++j) out[8 * i + j] = static_cast<std::uint8_t>(words_[i] >> (8 * j));
  }
  return out;
}

std::string Digest::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto byte : bytes()) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

std::vector<std::uint64_t> load_words_le(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint64_t> words(bytes.size() / 8 + (bytes.size() % 8 != 0));
  const std::size_t full = bytes.size() / 8;
  for (std::size_t i = 0; i < full; ++i) words[i] = load_le64(bytes.data() + 8 * i);
  if (full < words.size()) words[full] = load_le64_partial(bytes.data() + 8 * full, bytes.size() % 8);
  return words;
}

std::vector<std::uint64_t> hash_remainder(std::span<const std::uint64_t> tail, std::span<const std::uint64_t> r,
                                          std::size_t k, MulTally* tally) {
  if (k == 0) throw UsageError("hash_remainder needs k >= 1");
  if (r.size() < tail.size() + k - 1) throw SizingError("remainder key region too small");
  std::vector<std::uint64_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = nh_words(tail, r.subspan(i, tail.size()), tally);
  return out;
}

Digest hash_reference(std::span<const std::uint8_t> input, const SeedBuffer& seed, const HashParams& params,
                      StageTally* tally) {
  check_shape(params);
  const auto layout = SeedLayout::for_length(params, input.size());
  require_seed(seed, layout);

  const auto key = seed.words();
  const auto ehc_key = key.subspan(layout.ehc_offset, layout.ehc_size);
  const auto tree_key = key.subspan(layout.tree_offset, layout.tree_size);
  const auto words = load_words_le(input);
  const std::size_t iw = params.instance_words();
  const auto lanes = static_cast<Eigen::Index>(params.b);
  const auto blocks_per_instance = static_cast<Eigen::Index>(params.d * params.w);

  std::vector<TreeLevelStack<std::uint64_t>> trees(params.k, TreeLevelStack<std::uint64_t>(params.b, params.f));
  for (std::uint64_t inst = 0; inst < layout.instances; ++inst) {
    const Eigen::Map<const Blocks<std::uint64_t>> items(words.data() + inst * iw, lanes, blocks_per_instance);
    const Blocks<std::uint64_t> out = ehc(items, ehc_key, params, tally ? &tally->ehc : nullptr);
    for (std::size_t r = 0; r < params.k; ++r) {
      trees[r].push(out.col(static_cast<Eigen::Index>(r)),
                    LevelSeeds<std::uint64_t>{tree_key, params.f, params.k, r},
                    tally ? &tally->tree : nullptr);
    }
  }

  const auto tail = std::span<const std::uint64_t>(words).subspan(layout.instances * iw);
  const auto rem = hash_remainder(tail, key.subspan(layout.remainder_offset, layout.remainder_size), params.k,
                                  tally ? &tally->remainder : nullptr);

  std::vector<std::uint64_t> result(params.k);
  for (std::size_t r = 0; r < params.k; ++r) {
    const auto fin_key = key.subspan(layout.finalize_offset + r * layout.finalize_stride, layout.finalize_stride);
    result[r] = tree_finalize<std::uint64_t>(trees[r], input.size(), fin_key, tally ? &tally->finalize : nullptr) +
                rem[r];
  }
  return Digest(std::move(result));
}

// ---------------------------------------------------------------------------
// Fixed 8-lane path.

namespace {

constexpr std::size_t kLanes = 8;
constexpr std::size_t kFanout = 8;
constexpr std::size_t kMaxItemBlocks = 32;  // e·w
constexpr std::size_t kMaxTrees = 8;
constexpr std::size_t kMaxLevels = 24;      // 8^24 instances exceeds any 64-bit length

struct alignas(64) Lane {
  std::uint64_t v[kLanes];
};

inline std::uint64_t nh_pair(std::uint64_t x, std::uint64_t s) {
  const std::uint64_t lo = static_cast<std::uint32_t>(x + s);
  const std::uint64_t hi = static_cast<std::uint32_t>((x >> 32) + (s >> 32));
  return lo * hi;
}

inline void load_lane(Lane& out, const std::uint8_t* p) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.v, p, sizeof out.v);
  } else {
    for (std::size_t j = 0; j < kLanes; ++j) out.v[j] = load_le64(p + 8 * j);
  }
}

inline void xor_into(Lane& acc, const Lane& x) {
  for (std::size_t j = 0; j < kLanes; ++j) acc.v[j] ^= x.v[j];
}

inline void nh_into(Lane& acc, const Lane& x, std::uint64_t s) {
  for (std::size_t j = 0; j < kLanes; ++j) acc.v[j] += nh_pair(x.v[j], s);
}

template <int C>
inline void scaled_add(Lane& acc, const Lane& x) {
  for (std::size_t j = 0; j < kLanes; ++j) acc.v[j] += coefficient_multiply<std::uint64_t>(C, x.v[j]);
}

inline void scaled_add(Lane& acc, const Lane& x, std::int64_t c) {
  switch (c) {
    case 1: return scaled_add<1>(acc, x);
    case 2: return scaled_add<2>(acc, x);
    case 3: return scaled_add<3>(acc, x);
    case 4: return scaled_add<4>(acc, x);
    case 5: return scaled_add<5>(acc, x);
    case 7: return scaled_add<7>(acc, x);
    case 8: return scaled_add<8>(acc, x);
    case 9: return scaled_add<9>(acc, x);
    default: return;
  }
}

struct XorOp {
  std::uint8_t dst;
  std::uint8_t src;
};

struct CombineOp {
  std::uint8_t row;
  std::uint8_t col;
  std::int64_t coeff;
};

class LaneTree {
 public:
  void push(const Lane& block, std::span<const std::uint64_t> tree_key, std::size_t trees, std::size_t tree) {
    Lane carry = block;
    for (std::size_t level = 0;; ++level) {
      levels_[level][counts_[level]++] = carry;
      if (counts_[level] < kFanout) break;
      const std::uint64_t* s = tree_key.data() + (level * trees + tree) * (kFanout - 1);
      carry = levels_[level][kFanout - 1];
      for (std::size_t i = 0; i + 1 < kFanout; ++i) nh_into(carry, levels_[level][i], s[i]);
      counts_[level] = 0;
    }
  }

  std::uint64_t finalize(std::uint64_t n_tag, const std::uint64_t* s) const {
    std::uint64_t sum = 0;
    for (std::size_t level = 0; level < kMaxLevels; ++level) {
      for (std::size_t i = 0; i < counts_[level]; ++i) {
        for (std::size_t j = 0; j < kLanes; ++j) sum += nh_pair(levels_[level][i].v[j], *s++);
      }
    }
    return sum + nh_pair(n_tag, *s);
  }

 private:
  Lane levels_[kMaxLevels][kFanout];
  std::size_t counts_[kMaxLevels] = {};
};

}  // namespace

bool lanes_supported(const HashParams& params) {
  return params.b == kLanes && params.f == kFanout && params.e * params.w <= kMaxItemBlocks &&
         params.k <= kMaxTrees;
}

Digest hash_lanes(std::span<const std::uint8_t> input, const SeedBuffer& seed, const HashParams& params) {
  if (!lanes_supported(params)) throw ConfigurationError("lane path needs b = f = 8 and e·w <= 32");
  const auto layout = SeedLayout::for_length(params, input.size());
  require_seed(seed, layout);

  const std::size_t d = params.d, e = params.e, w = params.w, k = params.k;
  const auto key = seed.words();
  const std::uint64_t* ehc_key = key.data() + layout.ehc_offset;
  const auto tree_key = key.subspan(layout.tree_offset, layout.tree_size);

  std::vector<XorOp> xors;
  for (std::size_t j = 0; j < e - d; ++j) {
    for (std::size_t r = 0; r < w; ++r) {
      for (std::size_t i = 0; i < d; ++i) {
        const std::uint32_t m = params.code.mask(i, j, r);
        for (std::size_t c = 0; c < w; ++c) {
          if ((m >> c) & 1u) {
            xors.push_back({static_cast<std::uint8_t>((d + j) * w + r), static_cast<std::uint8_t>(i * w + c)});
          }
        }
      }
    }
  }
  std::vector<CombineOp> combines;
  for (std::size_t c = 0; c < e; ++c) {
    for (std::size_t r = 0; r < k; ++r) {
      const auto coeff = params.transform(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (coeff != 0) combines.push_back({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(c), coeff});
    }
  }

  std::vector<LaneTree> trees(k);
  Lane enc[kMaxItemBlocks];
  Lane hashed[kMaxItemBlocks];
  Lane out[kMaxTrees];
  const std::size_t instance_bytes = params.instance_bytes();
  std::vector<std::uint8_t> padded(instance_bytes, 0);
  for (std::uint64_t inst = 0; inst < layout.instances; ++inst) {
    const std::uint8_t* p = input.data() + inst * instance_bytes;
    if ((inst + 1) * instance_bytes > input.size()) {
      // Last instance ends inside the zero-padded final word.
      std::memcpy(padded.data(), p, input.size() - inst * instance_bytes);
      p = padded.data();
    }
    for (std::size_t blk = 0; blk < d * w; ++blk) load_lane(enc[blk], p + blk * sizeof(Lane));
    for (std::size_t blk = d * w; blk < e * w; ++blk) enc[blk] = Lane{};
    for (const auto& op : xors) xor_into(enc[op.dst], enc[op.src]);
    for (std::size_t i = 0; i < e; ++i) {
      hashed[i] = Lane{};
      for (std::size_t c = 0; c < w; ++c) nh_into(hashed[i], enc[i * w + c], ehc_key[i * w + c]);
    }
    for (std::size_t r = 0; r < k; ++r) out[r] = Lane{};
    for (const auto& op : combines) scaled_add(out[op.row], hashed[op.col], op.coeff);
    for (std::size_t r = 0; r < k; ++r) trees[r].push(out[r], tree_key, k, r);
  }

  // Remainder words straight from the byte stream.
  const std::size_t used = static_cast<std::size_t>(layout.instances) * instance_bytes;
  const std::uint64_t* r_key = key.data() + layout.remainder_offset;
  std::vector<std::uint64_t> result(k, 0);
  for (std::size_t t = 0; t < layout.tail_words; ++t) {
    const std::size_t at = used + 8 * t;
    const std::uint64_t x = at + 8 <= input.size() ? load_le64(input.data() + at)
                                                  : load_le64_partial(input.data() + at, input.size() - at);
    for (std::size_t i = 0; i < k; ++i) result[i] += nh_pair(x, r_key[t + i]);
  }

  for (std::size_t r = 0; r < k; ++r) {
    result[r] += trees[r].finalize(input.size(), key.data() + layout.finalize_offset + r * layout.finalize_stride);
  }
  return Digest(std::move(result));
}

Digest hash(std::span<const std::uint8_t> input, const SeedBuffer& seed, const HashParams& params) {
  return lanes_supported(params) ? hash_lanes(input, seed, params) : hash_reference(input, seed, params);
}

Digest hash(std::span<const std::uint8_t> input, const MasterSeed& master, const HashParams& params) {
  return hash(input, expand_seed(master, SeedLayout::for_length(params, input.size()).total()), params);
}

}  // namespace halftime

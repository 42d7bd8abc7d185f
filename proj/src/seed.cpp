#include "halftime/seed.hpp"

#include <algorithm>

#include "halftime/errors.hpp"
#include "halftime/tree.hpp"

namespace halftime {

std::uint64_t fold_master(const MasterSeed& master) {
  std::uint64_t folded = 0;
  for (std::size_t word = 0; word < 4; ++word) {
    std::uint64_t v = 0;
    for (std::size_t byte = 0; byte < 8; ++byte) {
      v |= static_cast<std::uint64_t>(master[word * 8 + byte]) << (8 * byte);
    }
    folded ^= v;
  }
  return folded;
}

SeedBuffer expand_seed(const MasterSeed& master, std::size_t needed) {
  SplitMix64 rng(fold_master(master));
  std::vector<std::uint64_t> words(needed);
  std::generate(words.begin(), words.end(), rng);
  return SeedBuffer(master, std::move(words));
}

MasterSeed parse_master_hex(std::string_view hex) {
  if (hex.size() != 64) throw UsageError("master seed must be 64 hex digits");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw UsageError(std::string("invalid hex digit '") + c + "' in master seed");
  };
  MasterSeed out{};
  for (std::size_t i = 0; i < 32; ++i) {
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

std::string master_hex(const MasterSeed& master) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto byte : master) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

SeedLayout SeedLayout::for_length(const HashParams& params, std::uint64_t n_bytes) {
  SeedLayout l;
  l.n_bytes = n_bytes;
  l.n_words = n_bytes / 8 + (n_bytes % 8 != 0);
  l.instances = l.n_words / params.instance_words();
  l.tail_words = l.n_words - l.instances * params.instance_words();
  l.height = l.instances == 0 ? 0 : tree_height(l.instances, params.f);
  // One instance still leaves a full block per tree for the finalizer.
  l.finalize_height = std::max<std::size_t>(l.height, 1);

  l.ehc_offset = 0;
  l.ehc_size = params.e * params.w;
  l.tree_offset = l.ehc_offset + l.ehc_size;
  l.tree_size = (params.f - 1) * l.height * params.k;
  l.finalize_offset = l.tree_offset + l.tree_size;
  l.finalize_stride = params.b * params.f * l.finalize_height;
  l.finalize_size = l.finalize_stride * params.k;
  l.remainder_offset = l.finalize_offset + l.finalize_size;
  l.remainder_size = params.instance_words() + params.k - 1;
  return l;
}

}  // namespace halftime

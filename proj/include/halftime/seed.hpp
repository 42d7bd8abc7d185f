#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halftime/params.hpp"

namespace halftime {

using MasterSeed = std::array<std::uint8_t, 32>;

/// splitmix64: state advances by the golden-ratio increment and each output
/// is the standard finalizer applied to the new state.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ull;

  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t operator()() {
    state_ += kIncrement;
    return mix(state_);
  }

 private:
  std::uint64_t state_;
};

/// The four little-endian master words XORed together.
std::uint64_t fold_master(const MasterSeed& master);

/// Expanded key material. Words are a prefix-stable stream: expanding more
/// words never changes the earlier ones.
class SeedBuffer {
 public:
  SeedBuffer(const MasterSeed& master, std::vector<std::uint64_t> words)
      : master_(master), words_(std::move(words)) {}

  const MasterSeed& master() const { return master_; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  MasterSeed master_;
  std::vector<std::uint64_t> words_;
};

SeedBuffer expand_seed(const MasterSeed& master, std::size_t needed);

/// Parses 64 hex digits (either case) into a master seed.
MasterSeed parse_master_hex(std::string_view hex);
std::string master_hex(const MasterSeed& master);

/// Region offsets within the expanded seed for one input length. Sizes follow
///   ehc: e·w   tree: (f−1)·h·k   finalize: b·f·max(h,1)·k   remainder: b·d·w + k − 1
/// where h = ⌈log_f(instances)⌉ (0 when there are fewer than two instances).
struct SeedLayout {
  std::uint64_t n_bytes = 0;
  std::uint64_t n_words = 0;
  std::uint64_t instances = 0;
  std::uint64_t tail_words = 0;
  std::size_t height = 0;
  std::size_t finalize_height = 0;

  std::size_t ehc_offset = 0, ehc_size = 0;
  std::size_t tree_offset = 0, tree_size = 0;
  std::size_t finalize_offset = 0, finalize_size = 0;
  std::size_t finalize_stride = 0;
  std::size_t remainder_offset = 0, remainder_size = 0;

  std::size_t total() const { return remainder_offset + remainder_size; }

  static SeedLayout for_length(const HashParams& params, std::uint64_t n_bytes);
};

}  // namespace halftime

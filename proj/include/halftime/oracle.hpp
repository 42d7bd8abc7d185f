#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "halftime/ehc.hpp"
#include "halftime/errors.hpp"
#include "halftime/nh.hpp"
#include "halftime/params.hpp"
#include "halftime/tree.hpp"

// Small-width instantiations of the production templates. With 4- or 8-bit
// halves the seed space is small enough to enumerate, so the A∆U and AU
// bounds can be measured exactly (or estimated with tight intervals).

namespace halftime::oracle {

struct Interval {
  double lower = 0;
  double upper = 0;
};

/// Wilson score interval for `hits` out of `trials` at normal quantile z.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 2.5758293035489);

/// Samples needed so a Chernoff bound pins an event of probability `bound`
/// to within a factor of two with confidence 1 − alpha.
std::uint64_t chernoff_trials(double bound, double alpha = 0.01);

enum class Verdict { pass, inconclusive, fail };

const char* to_string(Verdict v);

/// pass: estimate ≤ bound and the upper limit is below 2·bound.
/// fail: the lower limit is above bound. Otherwise inconclusive.
Verdict judge(double estimate, Interval ci, double bound);

struct DeltaResult {
  double probability = 0;        // max over the probed deltas
  std::uint64_t hits = 0;
  std::uint64_t seeds = 0;       // seeds enumerated or sampled
  bool exhaustive = true;
  std::vector<std::uint64_t> argmax_delta;
  std::uint64_t chernoff_trials = 0;  // statistical mode only
  Interval ci;                        // statistical mode only
};

/// NH probe: x and y are half-word sequences of equal even length.
/// With no delta the maximum over every δ is reported.
template <typename Word>
struct NhProbe {
  std::vector<Word> x;
  std::vector<Word> y;
  std::optional<Word> delta;
  bool exhaustive = true;
  std::uint64_t trials = 0;
  std::uint64_t rng_seed = 1;
};

/// EHC probe: x and y are d items of w words each (one lane). Seeds at the
/// first k encoded positions where x and y differ are enumerated; all other
/// seeds are held at `fixed_seed`.
template <typename Word>
struct EhcProbe {
  std::vector<Word> x;
  std::vector<Word> y;
  std::optional<std::vector<Word>> delta;
  Word fixed_seed = 0x5;
  bool exhaustive = true;
  std::uint64_t trials = 0;
  std::uint64_t rng_seed = 1;
};

namespace internal {

template <typename Word>
Word random_word(std::mt19937_64& rng) {
  return static_cast<Word>(rng());
}

template <typename Word>
std::uint64_t pack_delta(std::span<const Word> v) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < v.size(); ++i) key |= static_cast<std::uint64_t>(v[i]) << (i * NhWidth<Word>::full_bits);
  return key;
}

// Counts outcomes per key; a flat table when the key space is small.
class Histogram {
 public:
  explicit Histogram(unsigned key_bits) {
    if (key_bits <= 24) flat_.assign(std::size_t{1} << key_bits, 0);
  }
  void add(std::uint64_t key) {
    if (!flat_.empty()) {
      ++flat_[key];
    } else {
      ++sparse_[key];
    }
  }
  std::pair<std::uint64_t, std::uint64_t> max() const {
    std::uint64_t best_key = 0, best = 0;
    for (std::size_t i = 0; i < flat_.size(); ++i) {
      if (flat_[i] > best) best = flat_[i], best_key = i;
    }
    for (const auto& [key, count] : sparse_) {
      if (count > best) best = count, best_key = key;
    }
    return {best_key, best};
  }

 private:
  std::vector<std::uint64_t> flat_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

template <typename Word>
std::vector<Word> unpack(std::uint64_t key, std::size_t n, unsigned bits_each) {
  std::vector<Word> out(n);
  const std::uint64_t mask = bits_each >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits_each) - 1;
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Word>((key >> (i * bits_each)) & mask);
  return out;
}

}  // namespace internal

/// Pr_s[nh_full(x, s) − nh_full(y, s) = δ], maximized over δ unless the probe
/// fixes one. Exhaustive mode needs half_bits·|x| ≤ 32.
template <typename Word>
DeltaResult max_delta_probability(const NhProbe<Word>& probe) {
  using W = NhWidth<Word>;
  if (probe.x.size() != probe.y.size() || probe.x.size() % 2 != 0 || probe.x.empty()) {
    throw UsageError("NH probe inputs must have equal, even, nonzero length");
  }
  const std::size_t len = probe.x.size();
  DeltaResult result;
  auto difference = [&](std::span<const Word> seed) {
    return halftime::detail::sub(nh_full<Word>(probe.x, seed), nh_full<Word>(probe.y, seed));
  };

  if (probe.exhaustive) {
    const unsigned seed_bits = static_cast<unsigned>(W::half_bits * len);
    if (seed_bits > 32) throw UsageError("seed space above 2^32; use statistical mode with a fixed delta");
    if (!probe.delta && W::full_bits > 24) throw UsageError("full delta histogram needs full width <= 24 bits");
    internal::Histogram hist(probe.delta ? 0 : W::full_bits);
    std::vector<Word> seed(len);
    std::uint64_t hits = 0;
    const std::uint64_t count = std::uint64_t{1} << seed_bits;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < len; ++i) seed[i] = static_cast<Word>((s >> (i * W::half_bits)) & W::half_mask);
      const Word delta = difference(seed);
      if (probe.delta) {
        hits += delta == *probe.delta;
      } else {
        hist.add(delta);
      }
    }
    result.seeds = count;
    if (probe.delta) {
      result.hits = hits;
      result.argmax_delta = {*probe.delta};
    } else {
      const auto [key, best] = hist.max();
      result.hits = best;
      result.argmax_delta = {key};
    }
    result.probability = static_cast<double>(result.hits) / static_cast<double>(count);
    return result;
  }

  if (!probe.delta) throw UsageError("statistical mode needs a fixed delta");
  std::mt19937_64 rng(probe.rng_seed);
  std::vector<Word> seed(len);
  for (std::uint64_t t = 0; t < probe.trials; ++t) {
    for (auto& s : seed) s = static_cast<Word>(internal::random_word<Word>(rng) & W::half_mask);
    result.hits += difference(seed) == *probe.delta;
  }
  result.exhaustive = false;
  result.seeds = probe.trials;
  result.argmax_delta = {*probe.delta};
  result.probability = probe.trials ? static_cast<double>(result.hits) / static_cast<double>(probe.trials) : 0.0;
  result.ci = wilson_interval(result.hits, probe.trials);
  result.chernoff_trials = chernoff_trials(std::ldexp(1.0, -static_cast<int>(W::half_bits)));
  return result;
}

/// Pr_s[ehc(x, s) − ehc(y, s) = δ] with seeds enumerated only at k positions
/// where the encodings differ; requires w·full_bits·k ≤ 32 for exhaustive mode.
template <typename Word>
DeltaResult max_delta_probability(const EhcProbe<Word>& probe, const ErasureCode& code, const TransformMatrix& t) {
  using W = NhWidth<Word>;
  const std::size_t d = code.arity_in(), e = code.arity_out(), w = code.item_words();
  const std::size_t k = static_cast<std::size_t>(t.rows());
  if (probe.x.size() != d * w || probe.y.size() != d * w) throw UsageError("EHC probe inputs must be d*w words");
  if (static_cast<std::size_t>(t.cols()) != e) throw UsageError("matrix width must equal encoded length");

  const Eigen::Map<const Blocks<Word>> xs(probe.x.data(), 1, static_cast<Eigen::Index>(d * w));
  const Eigen::Map<const Blocks<Word>> ys(probe.y.data(), 1, static_cast<Eigen::Index>(d * w));
  const Blocks<Word> ex = encode(xs, code);
  const Blocks<Word> ey = encode(ys, code);

  std::vector<std::size_t> differing;
  for (std::size_t i = 0; i < e; ++i) {
    const auto a = ex.row(0).segment(static_cast<Eigen::Index>(i * w), static_cast<Eigen::Index>(w));
    const auto b = ey.row(0).segment(static_cast<Eigen::Index>(i * w), static_cast<Eigen::Index>(w));
    if ((a != b).any()) differing.push_back(i);
  }
  DeltaResult result;
  if (differing.empty()) {
    // Identical encodings: the difference is always zero.
    result.seeds = 1;
    result.hits = !probe.delta || std::all_of(probe.delta->begin(), probe.delta->end(), [](Word v) { return v == 0; });
    result.probability = static_cast<double>(result.hits);
    result.argmax_delta.assign(k, 0);
    return result;
  }
  if (differing.size() < k) throw ValidationError("encodings differ in fewer than k positions");
  differing.resize(k);

  std::vector<Word> entropy(e * w, probe.fixed_seed);
  auto difference = [&]() {
    const Blocks<Word> ox = combine(hash_encoded(ex, std::span<const Word>(entropy), w), t);
    const Blocks<Word> oy = combine(hash_encoded(ey, std::span<const Word>(entropy), w), t);
    std::vector<Word> delta(k);
    for (std::size_t r = 0; r < k; ++r) delta[r] = halftime::detail::sub(ox(0, static_cast<Eigen::Index>(r)), oy(0, static_cast<Eigen::Index>(r)));
    return delta;
  };
  auto set_seeds = [&](std::uint64_t s) {
    std::size_t slot = 0;
    for (std::size_t pos : differing) {
      for (std::size_t c = 0; c < w; ++c, ++slot) {
        entropy[pos * w + c] = static_cast<Word>(s >> (slot * W::full_bits));
      }
    }
  };

  const unsigned seed_bits = static_cast<unsigned>(W::full_bits * w * k);
  const unsigned delta_bits = static_cast<unsigned>(W::full_bits * k);
  if (probe.exhaustive) {
    if (seed_bits > 32) throw UsageError("conditioned seed space above 2^32; use statistical mode");
    if (!probe.delta && delta_bits > 32) throw UsageError("delta histogram too wide");
    internal::Histogram hist(probe.delta ? 0 : delta_bits);
    const std::uint64_t target = probe.delta ? internal::pack_delta<Word>(*probe.delta) : 0;
    std::uint64_t hits = 0;
    const std::uint64_t count = std::uint64_t{1} << seed_bits;
    for (std::uint64_t s = 0; s < count; ++s) {
      set_seeds(s);
      const std::uint64_t key = internal::pack_delta<Word>(difference());
      if (probe.delta) {
        hits += key == target;
      } else {
        hist.add(key);
      }
    }
    result.seeds = count;
    if (probe.delta) {
      result.hits = hits;
      result.argmax_delta.assign(probe.delta->begin(), probe.delta->end());
    } else {
      const auto [key, best] = hist.max();
      result.hits = best;
      for (auto v : internal::unpack<Word>(key, k, W::full_bits)) result.argmax_delta.push_back(v);
    }
    result.probability = static_cast<double>(result.hits) / static_cast<double>(count);
    return result;
  }

  if (!probe.delta) throw UsageError("statistical mode needs a fixed delta");
  std::mt19937_64 rng(probe.rng_seed);
  for (std::uint64_t trial = 0; trial < probe.trials; ++trial) {
    for (std::size_t pos : differing) {
      for (std::size_t c = 0; c < w; ++c) entropy[pos * w + c] = internal::random_word<Word>(rng);
    }
    result.hits += difference() == *probe.delta;
  }
  result.exhaustive = false;
  result.seeds = probe.trials;
  result.argmax_delta.assign(probe.delta->begin(), probe.delta->end());
  result.probability = probe.trials ? static_cast<double>(result.hits) / static_cast<double>(probe.trials) : 0.0;
  result.ci = wilson_interval(result.hits, probe.trials);
  return result;
}

enum class TreeInputs { distinct, identical };

struct TreeCollisionResult {
  std::uint64_t trials = 0;
  std::uint64_t collisions = 0;
  double estimate = 0;
  Interval ci;
  double bound = 0;  // h^k · 2^{−half_bits·k}
  Verdict verdict = Verdict::inconclusive;
};

/// Estimates the probability that k independent single-lane trees of height
/// h (f^h leaves) agree on two equal-length inputs.
template <typename Word>
TreeCollisionResult tree_collision_estimate(std::size_t fanout, std::size_t height, std::size_t k,
                                            std::uint64_t trials, std::uint64_t rng_seed = 7,
                                            TreeInputs inputs = TreeInputs::distinct) {
  using W = NhWidth<Word>;
  static_assert(W::half_bits <= 8, "tree estimates run at half widths of 8 bits or less");
  if (height == 0 || k == 0 || fanout < 2) throw UsageError("tree estimate needs h >= 1, k >= 1, f >= 2");
  std::size_t leaves = 1;
  for (std::size_t i = 0; i < height; ++i) leaves *= fanout;

  std::mt19937_64 rng(rng_seed);
  Blocks<Word> x(1, static_cast<Eigen::Index>(leaves));
  Blocks<Word> y(1, static_cast<Eigen::Index>(leaves));
  std::vector<Word> seeds(height * (fanout - 1));
  std::uniform_int_distribution<std::size_t> pick(0, leaves - 1);

  TreeCollisionResult result;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(0, j) = internal::random_word<Word>(rng);
    y = x;
    if (inputs == TreeInputs::distinct) {
      // Change between one and three leaves.
      const std::size_t changes = 1 + rng() % 3;
      for (std::size_t c = 0; c < changes; ++c) {
        const auto at = static_cast<Eigen::Index>(pick(rng));
        y(0, at) = internal::random_word<Word>(rng);
      }
      if ((x == y).all()) {
        const auto at = static_cast<Eigen::Index>(pick(rng));
        y(0, at) = static_cast<Word>(x(0, at) + 1);
      }
    }
    bool all_equal = true;
    for (std::size_t r = 0; r < k && all_equal; ++r) {
      for (auto& s : seeds) s = internal::random_word<Word>(rng);
      const LevelSeeds<Word> level_seeds{seeds, fanout, 1, 0};
      const auto tx = tree_reduce(x, fanout, level_seeds);
      const auto ty = tree_reduce(y, fanout, level_seeds);
      all_equal = tx.flatten() == ty.flatten();
    }
    result.collisions += all_equal;
  }
  result.trials = trials;
  result.estimate = trials ? static_cast<double>(result.collisions) / static_cast<double>(trials) : 0.0;
  result.ci = wilson_interval(result.collisions, trials);
  result.bound = std::pow(static_cast<double>(height), static_cast<double>(k)) *
                 std::ldexp(1.0, -static_cast<int>(W::half_bits * k));
  result.verdict = judge(result.estimate, result.ci, result.bound);
  return result;
}

}  // namespace halftime::oracle

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "halftime/errors.hpp"
#include "halftime/nh.hpp"

namespace halftime {

/// ⌈log_f n⌉, the number of seeded tree levels needed for n leaf blocks.
/// Requires n ≥ 1 and f ≥ 2.
std::size_t tree_height(std::uint64_t n_blocks, std::uint64_t fanout);

/// ⌊log_f n⌋, kept for comparing against the floor reading of the height.
std::size_t tree_height_floor(std::uint64_t n_blocks, std::uint64_t fanout);

/// Per-level node keys for one of `trees` interleaved trees. Level i of tree t
/// uses words[((i·trees) + t)·(f−1), +f−1), so keys depend only on the level.
template <typename Word>
struct LevelSeeds {
  std::span<const Word> words;
  std::size_t fanout = 2;
  std::size_t trees = 1;
  std::size_t tree = 0;

  std::span<const Word> level(std::size_t i) const {
    const std::size_t width = fanout - 1;
    const std::size_t offset = (i * trees + tree) * width;
    if (offset + width > words.size()) throw SizingError("tree seed region too small for level " + std::to_string(i));
    return words.subspan(offset, width);
  }
};

/// Streaming stack construction over f-ary NH nodes. Level i holds between 0
/// and f−1 pending blocks, each the root of a complete subtree of f^i leaves;
/// the pending counts are the base-f digits of the number of blocks pushed.
/// A level with no pending block is the ⊥ slot.
template <typename Word>
class TreeLevelStack {
 public:
  TreeLevelStack(std::size_t lanes, std::size_t fanout) : lanes_(lanes), fanout_(fanout) {
    if (fanout < 2) throw UsageError("tree fanout must be at least 2");
  }

  template <typename Derived>
  void push(const Eigen::DenseBase<Derived>& block, const LevelSeeds<Word>& seeds, MulTally* tally = nullptr) {
    if (static_cast<std::size_t>(block.rows()) != lanes_ || block.cols() != 1) {
      throw UsageError("tree block has the wrong number of lanes");
    }
    Block<Word> carry = block;
    for (std::size_t level = 0;; ++level) {
      if (level == levels_.size()) {
        levels_.push_back(Blocks<Word>::Zero(static_cast<Eigen::Index>(lanes_), static_cast<Eigen::Index>(fanout_)));
        counts_.push_back(0);
      }
      levels_[level].col(static_cast<Eigen::Index>(counts_[level]++)) = carry;
      if (counts_[level] < fanout_) break;
      carry = nh_blockwise(levels_[level], seeds.level(level), fanout_, tally);
      counts_[level] = 0;
    }
    ++absorbed_;
  }

  std::size_t lanes() const { return lanes_; }
  std::size_t fanout() const { return fanout_; }
  std::uint64_t absorbed() const { return absorbed_; }
  std::size_t depth() const { return levels_.size(); }

  /// Number of pending blocks at `level` (0 for ⊥).
  std::size_t pending(std::size_t level) const { return level < counts_.size() ? counts_[level] : 0; }

  /// Lanes × pending(level) view of the pending blocks.
  Blocks<Word> slot(std::size_t level) const {
    if (pending(level) == 0) return Blocks<Word>(static_cast<Eigen::Index>(lanes_), 0);
    return levels_[level].leftCols(static_cast<Eigen::Index>(counts_[level]));
  }

  /// Pending blocks in level order, lanes contiguous within each block.
  std::vector<Word> flatten() const {
    std::vector<Word> out;
    for (std::size_t level = 0; level < levels_.size(); ++level) {
      for (std::size_t j = 0; j < counts_[level]; ++j) {
        const auto col = levels_[level].col(static_cast<Eigen::Index>(j));
        out.insert(out.end(), col.data(), col.data() + lanes_);
      }
    }
    return out;
  }

 private:
  std::size_t lanes_;
  std::size_t fanout_;
  std::uint64_t absorbed_ = 0;
  std::vector<Blocks<Word>> levels_;
  std::vector<std::size_t> counts_;
};

/// Pushes every column of `blocks` through a fresh stack.
template <typename Derived>
TreeLevelStack<typename Derived::Scalar> tree_reduce(const Eigen::ArrayBase<Derived>& blocks, std::size_t fanout,
                                                     const LevelSeeds<typename Derived::Scalar>& seeds,
                                                     MulTally* tally = nullptr) {
  if (blocks.cols() == 0) throw UsageError("tree_reduce needs at least one block");
  TreeLevelStack<typename Derived::Scalar> stack(static_cast<std::size_t>(blocks.rows()), fanout);
  for (Eigen::Index j = 0; j < blocks.cols(); ++j) stack.push(blocks.col(j), seeds, tally);
  return stack;
}

/// NH over the flattened pending blocks followed by the length tag as one
/// final pair. Empty levels contribute nothing; their positions are a
/// function of the input length alone.
template <typename Word>
Word tree_finalize(const TreeLevelStack<Word>& stack, Word n_tag, std::span<const Word> seeds,
                   MulTally* tally = nullptr) {
  std::vector<Word> flat = stack.flatten();
  flat.push_back(n_tag);
  if (seeds.size() < flat.size()) throw SizingError("finalize seed region too small");
  return nh_words<Word>(flat, seeds, tally);
}

}  // namespace halftime

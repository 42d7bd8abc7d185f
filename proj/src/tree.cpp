#include "halftime/tree.hpp"

namespace halftime {

std::size_t tree_height(std::uint64_t n_blocks, std::uint64_t fanout) {
  if (n_blocks == 0) throw UsageError("tree height of an empty tree");
  if (fanout < 2) throw UsageError("tree fanout must be at least 2");
  std::size_t h = 0;
  unsigned __int128 span = 1;
  while (span < n_blocks) span *= fanout, ++h;
  return h;
}

std::size_t tree_height_floor(std::uint64_t n_blocks, std::uint64_t fanout) {
  if (n_blocks == 0) throw UsageError("tree height of an empty tree");
  if (fanout < 2) throw UsageError("tree fanout must be at least 2");
  std::size_t h = 0;
  for (std::uint64_t q = n_blocks; q >= fanout; q /= fanout) ++h;
  return h;
}

}  // namespace halftime

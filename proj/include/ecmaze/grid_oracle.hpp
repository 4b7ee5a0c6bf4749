#pragma once

#include <unordered_set>

#include "ecmaze/common.hpp"
#include "ecmaze/maze.hpp"

namespace ecmaze {

// Privileged coverage baseline: pays `weight` the first time each
// discretized (x, y) cell is entered during an episode, so the episode sum
// is weight * distinct cells visited.
class GridOracle {
 public:
  GridOracle(int cell_size, double weight);

  double bonus(Cell position);
  void episode_reset() { visited_.clear(); }
  int visited_count() const { return static_cast<int>(visited_.size()); }
  double weight() const { return weight_; }

 private:
  int cell_size_;
  double weight_;
  std::unordered_set<std::uint64_t> visited_;
};

}  // namespace ecmaze

#include "ecmaze/grid_oracle.hpp"

#include <cmath>

namespace ecmaze {

GridOracle::GridOracle(int cell_size, double weight)
    : cell_size_(cell_size), weight_(weight) {
  if (cell_size < 1) throw ConfigError("GridOracle: cell_size must be >= 1");
}

double GridOracle::bonus(Cell position) {
  const long cx = static_cast<long>(std::floor(static_cast<double>(position.x) / cell_size_));
  const long cy = static_cast<long>(std::floor(static_cast<double>(position.y) / cell_size_));
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
      static_cast<std::uint32_t>(cy);
  if (visited_.insert(key).second) return weight_;
  return 0.0;
}

}  // namespace ecmaze

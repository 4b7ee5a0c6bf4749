#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecmaze/common.hpp"

namespace ecmaze {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

// Perfect maze from a recursive backtracker on an odd grid, then 10% of the
// removable interior walls are knocked out to create loops. Border cells are
// always walls. Wall cells carry a texture id in [0, texture_count).
struct MazeSpec {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> walls;  // row-major, 1 = wall
  std::vector<int> wall_texture;    // valid where walls[i] == 1
  std::vector<Cell> spawn_cells;    // all open cells
  Cell goal_cell;
  std::uint64_t seed = 0;

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  bool is_wall(int x, int y) const {
    return !in_bounds(x, y) || walls[static_cast<std::size_t>(y) * width + x] != 0;
  }
  bool is_open(int x, int y) const { return in_bounds(x, y) && !is_wall(x, y); }
  int texture_at(int x, int y) const {
    return wall_texture[static_cast<std::size_t>(y) * width + x];
  }
};

// width/height must be odd and >= 7. Deterministic in seed.
MazeSpec generate_maze(std::uint64_t seed, int width, int height,
                       int texture_count);

// BFS shortest path in steps between two open cells; -1 if unreachable.
int shortest_path_len(const MazeSpec& maze, Cell from, Cell to);

// Number of open cells reachable from `start`.
int flood_fill_count(const MazeSpec& maze, Cell start);

int open_cell_count(const MazeSpec& maze);

// '#' wall, '.' open, 'G' goal; one row per line.
std::string maze_to_text(const MazeSpec& maze, bool mark_goal = true);

}  // namespace ecmaze

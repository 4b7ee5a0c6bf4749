#include "ecmaze/maze.hpp"

#include <array>
#include <deque>

namespace ecmaze {

namespace {

constexpr std::array<Cell, 4> kDirs = {Cell{0, -1}, Cell{1, 0}, Cell{0, 1},
                                       Cell{-1, 0}};

std::size_t idx(const MazeSpec& m, int x, int y) {
  return static_cast<std::size_t>(y) * m.width + x;
}

}  // namespace

MazeSpec generate_maze(std::uint64_t seed, int width, int height,
                       int texture_count) {
  if (width < 7 || height < 7 || width % 2 == 0 || height % 2 == 0) {
    throw ConfigError("generate_maze: width/height must be odd and >= 7");
  }
  if (texture_count < 1) {
    throw ConfigError("generate_maze: texture_count must be positive");
  }
  MazeSpec maze;
  maze.width = width;
  maze.height = height;
  maze.seed = seed;
  maze.walls.assign(static_cast<std::size_t>(width) * height, 1);
  maze.wall_texture.assign(maze.walls.size(), 0);

  Rng rng(derive_seed(seed, 0xA11CE));

  // Carve a spanning tree over the room lattice (odd coordinates) with an
  // iterative backtracker.
  auto carve = [&](int x, int y) { maze.walls[idx(maze, x, y)] = 0; };
  std::vector<std::uint8_t> visited(maze.walls.size(), 0);
  std::vector<Cell> stack;
  Cell start{1, 1};
  visited[idx(maze, start.x, start.y)] = 1;
  carve(start.x, start.y);
  stack.push_back(start);
  while (!stack.empty()) {
    Cell cur = stack.back();
    // Unvisited rooms two cells away.
    std::array<int, 4> options{};
    int count = 0;
    for (int d = 0; d < 4; ++d) {
      const int nx = cur.x + 2 * kDirs[d].x;
      const int ny = cur.y + 2 * kDirs[d].y;
      if (nx > 0 && nx < width - 1 && ny > 0 && ny < height - 1 &&
          !visited[idx(maze, nx, ny)]) {
        options[count++] = d;
      }
    }
    if (count == 0) {
      stack.pop_back();
      continue;
    }
    const int d = options[rng.uniform_int(count)];
    const Cell mid{cur.x + kDirs[d].x, cur.y + kDirs[d].y};
    const Cell next{cur.x + 2 * kDirs[d].x, cur.y + 2 * kDirs[d].y};
    carve(mid.x, mid.y);
    carve(next.x, next.y);
    visited[idx(maze, next.x, next.y)] = 1;
    stack.push_back(next);
  }

  // Loop creation: each interior wall separating two open cells falls with
  // probability 0.1. Removals only add edges, so connectivity is preserved.
  for (int y = 1; y < height - 1; ++y) {
    for (int x = 1; x < width - 1; ++x) {
      if (!maze.is_wall(x, y)) continue;
      const bool horizontal = maze.is_open(x - 1, y) && maze.is_open(x + 1, y);
      const bool vertical = maze.is_open(x, y - 1) && maze.is_open(x, y + 1);
      if ((horizontal || vertical) && rng.chance(0.1)) {
        maze.walls[idx(maze, x, y)] = 0;
      }
    }
  }

  for (std::size_t i = 0; i < maze.walls.size(); ++i) {
    if (maze.walls[i]) maze.wall_texture[i] = rng.uniform_int(texture_count);
  }

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (maze.is_open(x, y)) maze.spawn_cells.push_back({x, y});
    }
  }
  maze.goal_cell =
      maze.spawn_cells[rng.uniform_int(static_cast<int>(maze.spawn_cells.size()))];
  return maze;
}

int shortest_path_len(const MazeSpec& maze, Cell from, Cell to) {
  if (!maze.is_open(from.x, from.y) || !maze.is_open(to.x, to.y)) return -1;
  std::vector<int> dist(maze.walls.size(), -1);
  std::deque<Cell> queue;
  dist[idx(maze, from.x, from.y)] = 0;
  queue.push_back(from);
  while (!queue.empty()) {
    const Cell cur = queue.front();
    queue.pop_front();
    if (cur == to) return dist[idx(maze, cur.x, cur.y)];
    for (const Cell& d : kDirs) {
      const int nx = cur.x + d.x;
      const int ny = cur.y + d.y;
      if (maze.is_open(nx, ny) && dist[idx(maze, nx, ny)] < 0) {
        dist[idx(maze, nx, ny)] = dist[idx(maze, cur.x, cur.y)] + 1;
        queue.push_back({nx, ny});
      }
    }
  }
  return -1;
}

int flood_fill_count(const MazeSpec& maze, Cell start) {
  if (!maze.is_open(start.x, start.y)) return 0;
  std::vector<std::uint8_t> seen(maze.walls.size(), 0);
  std::deque<Cell> queue{start};
  seen[idx(maze, start.x, start.y)] = 1;
  int count = 0;
  while (!queue.empty()) {
    const Cell cur = queue.front();
    queue.pop_front();
    ++count;
    for (const Cell& d : kDirs) {
      const int nx = cur.x + d.x;
      const int ny = cur.y + d.y;
      if (maze.is_open(nx, ny) && !seen[idx(maze, nx, ny)]) {
        seen[idx(maze, nx, ny)] = 1;
        queue.push_back({nx, ny});
      }
    }
  }
  return count;
}

int open_cell_count(const MazeSpec& maze) {
  int count = 0;
  for (auto w : maze.walls) count += w == 0;
  return count;
}

std::string maze_to_text(const MazeSpec& maze, bool mark_goal) {
  std::string out;
  out.reserve((maze.width + 1) * maze.height);
  for (int y = 0; y < maze.height; ++y) {
    for (int x = 0; x < maze.width; ++x) {
      if (mark_goal && Cell{x, y} == maze.goal_cell && maze.is_open(x, y)) {
        out += 'G';
      } else {
        out += maze.is_wall(x, y) ? '#' : '.';
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace ecmaze

#include <doctest.h>

#include <set>
#include <vector>

#include "ecmaze/common.hpp"
#include "ecmaze/env.hpp"
#include "ecmaze/maze.hpp"

using namespace ecmaze;

namespace {

bool same_tensor(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::vector<double> channel_block(const Tensor& obs, int channel, int window) {
  std::vector<double> out;
  const std::size_t base = static_cast<std::size_t>(channel) * window * window;
  for (int i = 0; i < window * window; ++i) out.push_back(obs[base + i]);
  return out;
}

EnvConfig basic_config(Task task) {
  EnvConfig cfg;
  cfg.task.task = task;
  if (task == Task::kVerySparse) cfg.task.min_spawn_goal_distance = 12;
  return cfg;
}

}  // namespace

TEST_CASE("generate_maze is deterministic in the seed") {
  MazeSpec a = generate_maze(123, 15, 15, 4);
  MazeSpec b = generate_maze(123, 15, 15, 4);
  CHECK(a.walls == b.walls);
  CHECK(a.wall_texture == b.wall_texture);
  CHECK(a.goal_cell == b.goal_cell);
}

TEST_CASE("every open cell is reachable (flood fill oracle)") {
  for (std::uint64_t seed : {0ull, 1ull, 7ull, 42ull, 99ull}) {
    MazeSpec maze = generate_maze(seed, 7, 7, 4);
    const int open = open_cell_count(maze);
    REQUIRE(open > 0);
    CHECK(flood_fill_count(maze, maze.spawn_cells.front()) == open);
  }
  MazeSpec big = generate_maze(5, 15, 15, 4);
  CHECK(flood_fill_count(big, big.spawn_cells.front()) == open_cell_count(big));
}

TEST_CASE("maze layouts differ across seeds") {
  std::set<std::vector<std::uint8_t>> grids;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    grids.insert(generate_maze(seed, 15, 15, 4).walls);
  }
  CHECK(grids.size() >= 99);
}

TEST_CASE("generate_maze rejects bad dimensions") {
  CHECK_THROWS_AS(generate_maze(1, 6, 7, 4), ConfigError);
  CHECK_THROWS_AS(generate_maze(1, 7, 5, 4), ConfigError);
  CHECK_THROWS_AS(generate_maze(1, 7, 7, 0), ConfigError);
}

TEST_CASE("very sparse resets respect the spawn-goal gap") {
  Env env(basic_config(Task::kVerySparse));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    env.reset(seed);
    const int d = shortest_path_len(env.maze(), env.oracle_position(),
                                    env.maze().goal_cell);
    CHECK(d >= 12);
  }
}

TEST_CASE("no-reward task renders no goal and pays nothing") {
  Env env(basic_config(Task::kNoReward));
  Rng rng(4);
  double total = 0.0;
  env.reset(11);
  for (int t = 0; t < 200; ++t) {
    auto block = channel_block(env.obs(), obs_channel::kGoal, 5);
    for (double v : block) CHECK(v == 0.0);
    auto res = env.step(rng.uniform_int(env.action_count()));
    total += res.reward;
    if (res.done) env.reset(12 + t);
  }
  CHECK(total == 0.0);
}

TEST_CASE("reset is deterministic down to the observation bits") {
  Env a(basic_config(Task::kSparse));
  Env b(basic_config(Task::kSparse));
  a.reset(77);
  b.reset(77);
  CHECK(same_tensor(a.obs(), b.obs()));
  CHECK(a.oracle_position() == b.oracle_position());
}

TEST_CASE("observation/reward sequences replay bit-identically") {
  EnvConfig cfg = basic_config(Task::kSparse);
  cfg.task.tv.kind = TvVariant::kNoiseAction;
  Env a(cfg), b(cfg);
  a.reset(5);
  b.reset(5);
  Rng rng(3);
  std::vector<int> actions;
  for (int t = 0; t < 400; ++t) actions.push_back(rng.uniform_int(a.action_count()));
  for (int action : actions) {
    auto ra = a.step(action);
    auto rb = b.step(action);
    CHECK(ra.reward == rb.reward);
    CHECK(ra.done == rb.done);
    CHECK(same_tensor(a.obs(), b.obs()));
    if (ra.done) {
      a.reset(6);
      b.reset(6);
    }
  }
}

TEST_CASE("walking into a wall is a no-op") {
  Env env(basic_config(Task::kNoReward));
  env.reset(21);
  // Spin until a wall is directly ahead, then push against it.
  static constexpr Cell kVec[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  for (int tries = 0; tries < 4; ++tries) {
    const Cell pos = env.oracle_position();
    const Cell ahead{pos.x + kVec[env.heading()].x, pos.y + kVec[env.heading()].y};
    if (env.maze().is_wall(ahead.x, ahead.y)) {
      auto res = env.step(0);  // forward
      CHECK(env.oracle_position() == pos);
      CHECK(res.reward == 0.0);
      return;
    }
    env.step(3);  // turn right
  }
  FAIL("no wall adjacent to spawn in any direction");
}

TEST_CASE("forward moves one cell along the heading") {
  Env env(basic_config(Task::kNoReward));
  env.reset(33);
  static constexpr Cell kVec[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  int moves = 0;
  Rng rng(8);
  for (int t = 0; t < 300 && moves < 20; ++t) {
    const Cell pos = env.oracle_position();
    const int h = env.heading();
    const Cell ahead{pos.x + kVec[h].x, pos.y + kVec[h].y};
    const bool open = env.maze().is_open(ahead.x, ahead.y);
    auto res = env.step(0);
    if (res.done) {
      env.reset(34 + t);
      continue;
    }
    if (open) {
      CHECK(env.oracle_position() == ahead);
      ++moves;
    } else {
      CHECK(env.oracle_position() == pos);
    }
    env.step(rng.uniform_int(2) == 0 ? 2 : 3);
  }
  CHECK(moves >= 20);
}

TEST_CASE("sparse goal contact pays +10 and respawns the agent") {
  Env env(basic_config(Task::kSparse));
  Rng rng(19);
  int contacts = 0;
  double total = 0.0;
  env.reset(101);
  for (int t = 0; t < 20000 && contacts < 3; ++t) {
    auto res = env.step(rng.uniform_int(env.action_count()));
    total += res.reward;
    if (res.reward != 0.0) {
      CHECK(res.reward == 10.0);
      ++contacts;
      CHECK_FALSE(env.oracle_position() == env.maze().goal_cell);
    }
    if (res.done) env.reset(102 + t);
  }
  CHECK(contacts >= 1);
  CHECK(total == 10.0 * contacts);
}

TEST_CASE("position replay matches an independent kinematics model") {
  // NoReward has no respawns, so a test-side tracker can replay motion
  // using only the maze and the action semantics.
  Env env(basic_config(Task::kNoReward));
  env.reset(55);
  static constexpr Cell kVec[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  Cell pos = env.oracle_position();
  int heading = env.heading();
  Rng rng(66);
  for (int t = 0; t < 499; ++t) {
    const int action = rng.uniform_int(env.action_count());
    env.step(action);
    switch (action) {
      case 0:
      case 1: {
        const int sign = action == 0 ? 1 : -1;
        Cell target{pos.x + sign * kVec[heading].x, pos.y + sign * kVec[heading].y};
        if (env.maze().is_open(target.x, target.y)) pos = target;
        break;
      }
      case 2:
        heading = (heading + 3) % 4;
        break;
      case 3:
        heading = (heading + 1) % 4;
        break;
      default:
        break;
    }
    CHECK(env.oracle_position() == pos);
    CHECK(env.heading() == heading);
  }
}

TEST_CASE("tv variant none keeps the tv channel dark") {
  Env env(basic_config(Task::kSparse));
  env.reset(1);
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    for (double v : channel_block(env.obs(), obs_channel::kTv, 5)) CHECK(v == 0.0);
    if (env.step(rng.uniform_int(env.action_count())).done) env.reset(2 + t);
  }
}

TEST_CASE("noise tv changes every step regardless of action") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.task.tv.kind = TvVariant::kNoise;
  Env env(cfg);
  env.reset(9);
  CHECK(env.tv_switch_action() == -1);
  auto prev = channel_block(env.obs(), obs_channel::kTv, 5);
  Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    env.step(rng.uniform_int(env.action_count()));
    auto cur = channel_block(env.obs(), obs_channel::kTv, 5);
    CHECK(cur != prev);
    prev = cur;
  }
}

TEST_CASE("noise-action tv changes iff the switch action is taken") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.task.tv.kind = TvVariant::kNoiseAction;
  Env env(cfg);
  env.reset(14);
  const int sw = env.tv_switch_action();
  REQUIRE(sw >= 0);
  auto prev_obs = env.obs();
  auto prev_tv = channel_block(env.obs(), obs_channel::kTv, 5);
  Rng rng(15);
  for (int t = 0; t < 200; ++t) {
    const int action = rng.uniform_int(env.action_count());
    env.step(action);
    auto tv = channel_block(env.obs(), obs_channel::kTv, 5);
    if (action == sw) {
      CHECK(tv != prev_tv);
      // All non-TV channels are untouched by a switch.
      for (int chan = 0; chan < obs_channel::kCount; ++chan) {
        if (chan == obs_channel::kTv || chan == obs_channel::kFlash) continue;
        CHECK(channel_block(env.obs(), chan, 5) == channel_block(prev_obs, chan, 5));
      }
    } else {
      CHECK(tv == prev_tv);
    }
    prev_tv = tv;
    prev_obs = env.obs();
  }
}

TEST_CASE("image-action tv flips between one-hot patterns on switch") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.task.tv.kind = TvVariant::kImageAction;
  cfg.task.tv.image_count = 4;
  Env env(cfg);
  env.reset(3);
  const int sw = env.tv_switch_action();
  REQUIRE(sw >= 0);
  auto prev_tv = channel_block(env.obs(), obs_channel::kTv, 5);
  for (int t = 0; t < 50; ++t) {
    env.step(sw);
    auto tv = channel_block(env.obs(), obs_channel::kTv, 5);
    CHECK(tv != prev_tv);
    double sum = 0.0;
    for (double v : tv) {
      sum += v;
      CHECK((v == 0.0 || v == 1.0));
    }
    CHECK(sum == 1.0);  // one-hot pattern
    prev_tv = tv;
  }
  EnvConfig bad = cfg;
  bad.task.tv.image_count = 9;
  CHECK_THROWS_AS(Env{bad}, ConfigError);
}

TEST_CASE("tv panel stays inside the lower-right quadrant") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.task.tv.kind = TvVariant::kNoise;
  Env env(cfg);
  env.reset(8);
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const Tensor& obs = env.obs();
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) {
        const double v = obs[(obs_channel::kTv * 5 + r) * 5 + c];
        if (r < 3 || c < 3) CHECK(v == 0.0);
      }
    }
    env.step(rng.uniform_int(env.action_count()));
  }
}

TEST_CASE("fire pulses the flash channel for exactly one step") {
  Env env(basic_config(Task::kNoReward));
  env.reset(90);
  auto flash = [&]() {
    double sum = 0.0;
    for (double v : channel_block(env.obs(), obs_channel::kFlash, 5)) sum += v;
    return sum;
  };
  CHECK(flash() == 0.0);
  env.step(4);  // fire
  CHECK(flash() == 25.0);
  env.step(2);  // turn
  CHECK(flash() == 0.0);

  EnvConfig nofire = basic_config(Task::kNoReward);
  nofire.include_fire = false;
  Env env2(nofire);
  env2.reset(1);
  CHECK(env2.action_count() == 4);
  CHECK_THROWS_AS(env2.step(4), UsageError);
}

TEST_CASE("observations stay in the unit interval") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.task.tv.kind = TvVariant::kNoise;
  Env env(cfg);
  env.reset(31);
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const Tensor& obs = env.obs();
    for (std::size_t i = 0; i < obs.size(); ++i) {
      CHECK(obs[i] >= 0.0);
      CHECK(obs[i] <= 1.0);
    }
    if (env.step(rng.uniform_int(env.action_count())).done) env.reset(33 + t);
  }
}

TEST_CASE("dense task scatters collectable objects worth +1") {
  Env env(basic_config(Task::kDense));
  Rng rng(41);
  double total = 0.0;
  env.reset(7);
  int episodes = 0;
  for (int t = 0; t < 30000 && episodes < 3; ++t) {
    auto res = env.step(rng.uniform_int(env.action_count()));
    if (res.reward != 0.0) CHECK(res.reward == 1.0);
    total += res.reward;
    if (res.done) {
      env.reset(8 + t);
      ++episodes;
    }
  }
  CHECK(total > 0.0);
}

TEST_CASE("stepping a finished episode and bad actions raise usage errors") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.task.episode_length = 3;
  Env env(cfg);
  env.reset(5);
  CHECK_THROWS_AS(env.step(-1), UsageError);
  CHECK_THROWS_AS(env.step(99), UsageError);
  env.step(2);
  env.step(2);
  auto res = env.step(2);
  CHECK(res.done);
  CHECK_THROWS_AS(env.step(0), UsageError);
}

TEST_CASE("privileged position access can be disabled") {
  EnvConfig cfg = basic_config(Task::kNoReward);
  cfg.position_access = false;
  Env env(cfg);
  env.reset(2);
  CHECK_THROWS_AS(env.oracle_position(), UsageError);
}

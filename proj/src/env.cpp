#include "ecmaze/env.hpp"

#include <algorithm>
#include <array>

namespace ecmaze {

namespace {

constexpr std::array<Cell, 4> kHeadingVec = {Cell{0, -1}, Cell{1, 0},
                                             Cell{0, 1}, Cell{-1, 0}};

constexpr std::uint64_t kMazeSalt = 0x6d617a65;   // stream tags
constexpr std::uint64_t kEpisodeSalt = 0x657073;

}  // namespace

const char* action_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::kForward: return "forward";
    case ActionKind::kBackward: return "backward";
    case ActionKind::kTurnLeft: return "turn_left";
    case ActionKind::kTurnRight: return "turn_right";
    case ActionKind::kFire: return "fire";
    case ActionKind::kTvSwitch: return "tv_switch";
  }
  return "?";
}

Env::Env(EnvConfig config) : config_(std::move(config)) {
  if (config_.window < 3 || config_.window % 2 == 0) {
    throw ConfigError("Env: window must be odd and >= 3");
  }
  const TvVariant& tv = config_.task.tv;
  if (tv.kind == TvVariant::kImageAction) {
    // The 2x2 panel fits at most four orthogonal one-hot patterns, and the
    // switch must visibly change the screen, so at least two are needed.
    if (tv.image_count < 2 || tv.image_count > 4) {
      throw ConfigError("Env: ImageAction image_count must be in [2, 4]");
    }
  }
  if (config_.task.task == Task::kVerySparse &&
      config_.task.min_spawn_goal_distance <= 0) {
    throw ConfigError("Env: VerySparse requires min_spawn_goal_distance > 0");
  }
  if (config_.task.episode_length <= 0) {
    throw ConfigError("Env: episode_length must be positive");
  }
  actions_ = {ActionKind::kForward, ActionKind::kBackward,
              ActionKind::kTurnLeft, ActionKind::kTurnRight};
  if (config_.include_fire) actions_.push_back(ActionKind::kFire);
  if (tv.has_switch_action()) actions_.push_back(ActionKind::kTvSwitch);
  tv_panel_.assign(4, 0.0);
}

int Env::tv_switch_action() const {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i] == ActionKind::kTvSwitch) return static_cast<int>(i);
  }
  return -1;
}

Tensor Env::fresh_noise() {
  Tensor t({4});
  for (int i = 0; i < 4; ++i) t[i] = rng_.uniform();
  return t;
}

const Tensor& Env::reset(std::uint64_t episode_seed) {
  rng_ = Rng(derive_seed(episode_seed, kEpisodeSalt));
  const TaskConfig& task = config_.task;

  const bool needs_goal =
      task.task == Task::kSparse || task.task == Task::kVerySparse;
  bool placed = false;
  for (int regen = 0; regen < 100 && !placed; ++regen) {
    maze_ = generate_maze(derive_seed(episode_seed, kMazeSalt + regen),
                          config_.width, config_.height, config_.texture_count);
    const auto& cells = maze_.spawn_cells;
    const int ncells = static_cast<int>(cells.size());
    const int attempts = needs_goal ? 1000 : 1;
    for (int a = 0; a < attempts; ++a) {
      Cell candidate = cells[rng_.uniform_int(ncells)];
      if (needs_goal) {
        if (candidate == maze_.goal_cell) continue;
        if (task.task == Task::kVerySparse &&
            shortest_path_len(maze_, candidate, maze_.goal_cell) <
                task.min_spawn_goal_distance) {
          continue;
        }
      }
      pos_ = candidate;
      placed = true;
      break;
    }
  }
  if (!placed) {
    throw ConfigError(
        "Env::reset: no spawn satisfies min_spawn_goal_distance after "
        "repeated maze regeneration");
  }
  heading_ = rng_.uniform_int(4);

  objects_.clear();
  if (config_.task.task == Task::kDense) {
    std::vector<Cell> pool;
    for (const Cell& c : maze_.spawn_cells) {
      if (!(c == pos_)) pool.push_back(c);
    }
    const int want = std::min<int>(config_.dense_object_count,
                                   static_cast<int>(pool.size()));
    for (int i = 0; i < want; ++i) {
      const int j = i + rng_.uniform_int(static_cast<int>(pool.size()) - i);
      std::swap(pool[i], pool[j]);
      objects_.push_back(pool[i]);
    }
  }

  switch (config_.task.tv.kind) {
    case TvVariant::kNone:
      std::fill(tv_panel_.begin(), tv_panel_.end(), 0.0);
      break;
    case TvVariant::kImageAction:
      tv_image_id_ = rng_.uniform_int(config_.task.tv.image_count);
      std::fill(tv_panel_.begin(), tv_panel_.end(), 0.0);
      tv_panel_[tv_image_id_] = 1.0;
      break;
    case TvVariant::kNoise:
    case TvVariant::kNoiseAction: {
      Tensor n = fresh_noise();
      for (int i = 0; i < 4; ++i) tv_panel_[i] = n[i];
      break;
    }
  }

  steps_ = 0;
  done_ = false;
  flash_ = false;
  render();
  return obs_;
}

void Env::respawn_agent() {
  const auto& cells = maze_.spawn_cells;
  Cell candidate;
  do {
    candidate = cells[rng_.uniform_int(static_cast<int>(cells.size()))];
  } while (candidate == maze_.goal_cell);
  pos_ = candidate;
  heading_ = rng_.uniform_int(4);
}

Env::StepResult Env::step(int action) {
  if (done_) throw UsageError("Env::step: episode already done");
  if (action < 0 || action >= action_count()) {
    throw UsageError("Env::step: action index out of range");
  }
  const TaskConfig& task = config_.task;
  flash_ = false;
  double reward = 0.0;

  switch (actions_[action]) {
    case ActionKind::kForward:
    case ActionKind::kBackward: {
      const int sign = actions_[action] == ActionKind::kForward ? 1 : -1;
      const Cell d = kHeadingVec[heading_];
      const Cell target{pos_.x + sign * d.x, pos_.y + sign * d.y};
      if (maze_.is_open(target.x, target.y)) pos_ = target;
      break;
    }
    case ActionKind::kTurnLeft:
      heading_ = (heading_ + 3) % 4;
      break;
    case ActionKind::kTurnRight:
      heading_ = (heading_ + 1) % 4;
      break;
    case ActionKind::kFire:
      flash_ = true;  // visual no-op: one-step pulse on the flash channel
      break;
    case ActionKind::kTvSwitch:
      if (task.tv.kind == TvVariant::kImageAction) {
        // Always lands on a different image so the switch is observable.
        int next = rng_.uniform_int(task.tv.image_count - 1);
        if (next >= tv_image_id_) ++next;
        tv_image_id_ = next;
        std::fill(tv_panel_.begin(), tv_panel_.end(), 0.0);
        tv_panel_[tv_image_id_] = 1.0;
      } else if (task.tv.kind == TvVariant::kNoiseAction) {
        Tensor n = fresh_noise();
        for (int i = 0; i < 4; ++i) tv_panel_[i] = n[i];
      }
      break;
  }

  if (task.tv.kind == TvVariant::kNoise) {
    Tensor n = fresh_noise();
    for (int i = 0; i < 4; ++i) tv_panel_[i] = n[i];
  }

  bool all_collected = false;
  switch (task.task) {
    case Task::kSparse:
    case Task::kVerySparse:
      if (pos_ == maze_.goal_cell) {
        reward = 10.0;
        respawn_agent();
      }
      break;
    case Task::kDense: {
      auto it = std::find(objects_.begin(), objects_.end(), pos_);
      if (it != objects_.end()) {
        reward = 1.0;
        objects_.erase(it);
      }
      all_collected = objects_.empty();
      break;
    }
    case Task::kNoReward:
      break;
  }

  ++steps_;
  done_ = steps_ >= task.episode_length ||
          (task.task == Task::kDense && all_collected);
  render();
  return {reward, done_};
}

Cell Env::oracle_position() const {
  if (!config_.position_access) {
    throw UsageError("Env::oracle_position: privileged position access is disabled");
  }
  return pos_;
}

void Env::render() {
  namespace ch = obs_channel;
  const int w = config_.window;
  const int half = w / 2;
  if (obs_.empty()) obs_ = Tensor({ch::kCount, w, w});
  obs_.fill(0.0);
  auto at = [&](int channel, int r, int c) -> double& {
    return obs_[(static_cast<std::size_t>(channel) * w + r) * w + c];
  };

  const Cell fwd = kHeadingVec[heading_];
  const Cell right = kHeadingVec[(heading_ + 1) % 4];
  const bool render_goal = config_.task.task == Task::kSparse ||
                           config_.task.task == Task::kVerySparse;

  for (int r = 0; r < w; ++r) {
    for (int c = 0; c < w; ++c) {
      const int ahead = half - r;
      const int lateral = c - half;
      const int x = pos_.x + fwd.x * ahead + right.x * lateral;
      const int y = pos_.y + fwd.y * ahead + right.y * lateral;
      if (maze_.is_wall(x, y)) {
        at(ch::kWall, r, c) = 1.0;
        if (maze_.in_bounds(x, y)) {
          const int bucket = maze_.texture_at(x, y) % ch::kTexBuckets;
          at(ch::kTexBase + bucket, r, c) = 1.0;
        }
      } else {
        at(ch::kFloor, r, c) = 1.0;
        if (render_goal && Cell{x, y} == maze_.goal_cell) {
          at(ch::kGoal, r, c) = 1.0;
        }
        if (config_.task.task == Task::kDense) {
          if (std::find(objects_.begin(), objects_.end(), Cell{x, y}) !=
              objects_.end()) {
            at(ch::kGoal, r, c) = 1.0;
          }
        }
      }
    }
  }

  // TV panel HUD: 2x2 block in the lower-right quadrant.
  if (config_.task.tv.kind != TvVariant::kNone) {
    const int r0 = half + 1;
    const int c0 = half + 1;
    int i = 0;
    for (int dr = 0; dr < 2; ++dr) {
      for (int dc = 0; dc < 2; ++dc) {
        const int rr = r0 + dr;
        const int cc = c0 + dc;
        if (rr < w && cc < w) at(ch::kTv, rr, cc) = tv_panel_[i];
        ++i;
      }
    }
  }

  if (flash_) {
    for (int r = 0; r < w; ++r) {
      for (int c = 0; c < w; ++c) at(ch::kFlash, r, c) = 1.0;
    }
  }
}

}  // namespace ecmaze

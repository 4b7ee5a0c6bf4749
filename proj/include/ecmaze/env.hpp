#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecmaze/maze.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

enum class Task { kDense, kSparse, kVerySparse, kNoReward };

struct TvVariant {
  enum Kind { kNone, kImageAction, kNoise, kNoiseAction };
  Kind kind = kNone;
  int image_count = 4;  // ImageAction only; one-hot patterns on the TV panel

  bool has_switch_action() const {
    return kind == kImageAction || kind == kNoiseAction;
  }
};

struct TaskConfig {
  Task task = Task::kSparse;
  TvVariant tv;
  int episode_length = 500;
  int min_spawn_goal_distance = 0;  // BFS cells; enforced for VerySparse
};

struct EnvConfig {
  TaskConfig task;
  int width = 15;
  int height = 15;
  int texture_count = 4;
  int window = 5;  // odd egocentric window size
  bool include_fire = true;
  bool position_access = true;  // privileged (x, y) readout switch
  int dense_object_count = 8;
};

enum class ActionKind { kForward, kBackward, kTurnLeft, kTurnRight, kFire, kTvSwitch };

const char* action_name(ActionKind kind);

// Observation layout: [channels x window x window], row 0 is the row
// furthest ahead of the agent, column 0 the leftmost. The TV panel is a HUD
// overlay over the lower-right quadrant; the flash channel lights up for one
// step after Fire.
namespace obs_channel {
constexpr int kWall = 0;
constexpr int kFloor = 1;
constexpr int kGoal = 2;
constexpr int kTexBase = 3;  // 4 texture-bucket channels
constexpr int kTexBuckets = 4;
constexpr int kTv = 7;
constexpr int kFlash = 8;
constexpr int kCount = 9;
}  // namespace obs_channel

// Seeded grid-maze environment. Every reset generates a fresh maze; all
// stochasticity derives from the reset seed, so an identical (config, seed,
// action sequence) reproduces observations and rewards bit for bit.
class Env {
 public:
  explicit Env(EnvConfig config);

  const Tensor& reset(std::uint64_t episode_seed);

  struct StepResult {
    double reward = 0.0;
    bool done = false;
  };
  StepResult step(int action);

  const Tensor& obs() const { return obs_; }

  // Privileged ground-truth cell. Only the Grid Oracle baseline and the
  // metrics layer may call this.
  Cell oracle_position() const;

  int action_count() const { return static_cast<int>(actions_.size()); }
  const std::vector<ActionKind>& actions() const { return actions_; }
  int tv_switch_action() const;  // -1 when the action set has none

  const EnvConfig& config() const { return config_; }
  const MazeSpec& maze() const { return maze_; }
  int step_count() const { return steps_; }
  bool done() const { return done_; }
  int heading() const { return heading_; }
  int obs_size() const {
    return obs_channel::kCount * config_.window * config_.window;
  }

 private:
  void render();
  void respawn_agent();
  Tensor fresh_noise();

  EnvConfig config_;
  std::vector<ActionKind> actions_;
  MazeSpec maze_;
  Rng rng_;
  Cell pos_;
  int heading_ = 0;  // 0=N, 1=E, 2=S, 3=W
  int steps_ = 0;
  bool done_ = true;
  bool flash_ = false;
  int tv_image_id_ = 0;
  std::vector<double> tv_panel_;  // 2x2 HUD values in [0,1]
  std::vector<Cell> objects_;     // Dense task collectibles
  Tensor obs_;
};

}  // namespace ecmaze

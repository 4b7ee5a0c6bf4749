#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ecmaze/config.hpp"
#include "ecmaze/metrics.hpp"
#include "ecmaze/pairs.hpp"
#include "ecmaze/rnet_train.hpp"

namespace ecmaze {

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::vector<MetricsRow> rows;
  bool failed = false;
  std::string error;
  bool truncated = false;  // budget exhausted before the policy phase
  long env_steps_used = 0;

  // Means over the final 10% of the step budget (completed episodes).
  double final_task_reward = 0.0;
  double final_coverage = 0.0;
  double final_mean_bonus = 0.0;
  double final_tv_switch_frac = 0.0;
  double rnet_val_acc = 0.0;  // last known; NaN for bonus-free methods

  double wall_seconds = 0.0;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<SeedOutcome> seeds;

  std::vector<double> final_coverages() const;
  std::vector<double> final_task_rewards() const;
  std::vector<double> final_tv_switch_fracs() const;
};

// Runs every seed (ECMAZE_WORKERS parallel slots, default 1), merges rows
// sorted by seed, and writes metrics.csv / summary.csv / timing.csv plus
// per-seed checkpoints into config.out_dir (no files when out_dir empty).
RunResult run_experiment(const ExperimentConfig& config);

// One seed's full pipeline; exposed for tests.
SeedOutcome run_seed(const ExperimentConfig& config, std::uint64_t seed);

int worker_slots();

// Random-policy data collection for the offline protocol. Consumes exactly
// `budget` env steps (the final episode may be truncated).
std::shared_ptr<TrajectoryStore> collect_random_trajectories(
    const EnvConfig& env_config, long budget, std::uint64_t seed);

// Offline R-network pipeline: collect, mine, split, train. Writes
// out_dir/rnet.txt and out_dir/rnet_training.csv when out_dir is set.
struct TrainRnetResult {
  RNetwork net;
  std::vector<RnetEpochLog> log;
  long collected_steps = 0;
  std::string checkpoint_path;
};
TrainRnetResult train_rnet_offline(const ExperimentConfig& config,
                                   std::uint64_t seed,
                                   const std::string& out_dir);

// Replays a trajectory dump through a fresh environment and verifies
// positions, rewards and done flags; throws IoError/UsageError on mismatch.
struct ReplayReport {
  long steps = 0;
  double total_reward = 0.0;
};
ReplayReport replay_trajectory(const std::string& path);

}  // namespace ecmaze

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecmaze/curiosity.hpp"
#include "ecmaze/env.hpp"
#include "ecmaze/icm.hpp"
#include "ecmaze/ppo.hpp"
#include "ecmaze/rnet_train.hpp"

namespace ecmaze {

enum class Method { kPpo, kPpoIcm, kPpoEc, kPpoEco, kPpoGridOracle };

const char* method_name(Method method);
Method method_from_name(const std::string& name);

// R-network protocol knobs: mining, offline budget, online retraining.
struct RnetOptions {
  int k = 5;
  double gap_multiplier = 2.0;
  int pairs_per_episode = 200;
  long offline_budget = 100000;
  double val_fraction = 0.1;
  RnetTrainConfig train;
  std::string checkpoint;  // optional pretrained net; skips collection
  bool untrained = false;  // use the random init as-is (ablation arm)
  long online_interval = 20000;
  long online_replay = 40000;
  int online_epochs = 10;
};

struct ExperimentConfig {
  Method method = Method::kPpo;
  EnvConfig env;
  BonusConfig bonus;
  PPOConfig ppo;
  RnetOptions rnet;
  IcmConfig icm;
  int grid_cell_size = 1;
  double grid_weight = 0.05;
  long total_budget = 300000;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string out_dir;
  bool bonus_log = false;
  bool dump_trajectories = false;
};

// Flat key=value text files. '#' starts a comment; a line of the form
// `include <path>` splices another file (relative to the including file).
using KvConfig = std::map<std::string, std::string>;

KvConfig parse_kv_file(const std::string& path);
KvConfig parse_kv_text(const std::string& text, const std::string& base_dir);

// Builds an ExperimentConfig, rejecting unknown keys by name.
ExperimentConfig experiment_from_kv(const KvConfig& kv);
ExperimentConfig load_experiment_config(const std::string& path);

// Applies one `key=value` override (CLI --set).
void apply_override(KvConfig& kv, const std::string& assignment);

// Seed lists accept "0..9" ranges and comma lists ("0,2,5").
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace ecmaze

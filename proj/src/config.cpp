#include "ecmaze/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ecmaze {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" +
                      value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" +
                    value + "'");
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::kPpo: return "ppo";
    case Method::kPpoIcm: return "ppo_icm";
    case Method::kPpoEc: return "ppo_ec";
    case Method::kPpoEco: return "ppo_eco";
    case Method::kPpoGridOracle: return "ppo_grid_oracle";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "ppo") return Method::kPpo;
  if (name == "ppo_icm") return Method::kPpoIcm;
  if (name == "ppo_ec") return Method::kPpoEc;
  if (name == "ppo_eco") return Method::kPpoEco;
  if (name == "ppo_grid_oracle") return Method::kPpoGridOracle;
  throw ConfigError("unknown method: " + name +
                    " (expected ppo|ppo_icm|ppo_ec|ppo_eco|ppo_grid_oracle)");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const long lo = to_long("seeds", trim(text.substr(0, dots)));
    const long hi = to_long("seeds", trim(text.substr(dots + 2)));
    if (hi < lo) throw ConfigError("config: empty seed range '" + text + "'");
    for (long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) seeds.push_back(static_cast<std::uint64_t>(to_long("seeds", part)));
  }
  if (seeds.empty()) throw ConfigError("config: empty seed list");
  return seeds;
}

KvConfig parse_kv_text(const std::string& text, const std::string& base_dir) {
  KvConfig kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("include ", 0) == 0) {
      std::filesystem::path inc(trim(line.substr(8)));
      if (inc.is_relative() && !base_dir.empty()) {
        inc = std::filesystem::path(base_dir) / inc;
      }
      for (auto& [k, v] : parse_kv_file(inc.string())) kv[k] = v;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not key=value: '" + line + "'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KvConfig parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str(), std::filesystem::path(path).parent_path().string());
}

void apply_override(KvConfig& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be key=value: '" + assignment + "'");
  }
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

ExperimentConfig experiment_from_kv(const KvConfig& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "method") cfg.method = method_from_name(value);
    else if (key == "seeds") cfg.seeds = parse_seed_list(value);
    else if (key == "budget") cfg.total_budget = to_long(key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "bonus_log") cfg.bonus_log = to_bool(key, value);
    else if (key == "dump_trajectories") cfg.dump_trajectories = to_bool(key, value);

    else if (key == "env.task") {
      if (value == "dense") cfg.env.task.task = Task::kDense;
      else if (value == "sparse") cfg.env.task.task = Task::kSparse;
      else if (value == "very_sparse") cfg.env.task.task = Task::kVerySparse;
      else if (value == "no_reward") cfg.env.task.task = Task::kNoReward;
      else throw ConfigError("config: env.task must be dense|sparse|very_sparse|no_reward");
    } else if (key == "env.tv") {
      if (value == "none") cfg.env.task.tv.kind = TvVariant::kNone;
      else if (value == "image_action") cfg.env.task.tv.kind = TvVariant::kImageAction;
      else if (value == "noise") cfg.env.task.tv.kind = TvVariant::kNoise;
      else if (value == "noise_action") cfg.env.task.tv.kind = TvVariant::kNoiseAction;
      else throw ConfigError("config: env.tv must be none|image_action|noise|noise_action");
    } else if (key == "env.tv_images") cfg.env.task.tv.image_count = static_cast<int>(to_long(key, value));
    else if (key == "env.episode_length") cfg.env.task.episode_length = static_cast<int>(to_long(key, value));
    else if (key == "env.min_spawn_goal_distance") cfg.env.task.min_spawn_goal_distance = static_cast<int>(to_long(key, value));
    else if (key == "env.width") cfg.env.width = static_cast<int>(to_long(key, value));
    else if (key == "env.height") cfg.env.height = static_cast<int>(to_long(key, value));
    else if (key == "env.texture_count") cfg.env.texture_count = static_cast<int>(to_long(key, value));
    else if (key == "env.window") cfg.env.window = static_cast<int>(to_long(key, value));
    else if (key == "env.include_fire") cfg.env.include_fire = to_bool(key, value);
    else if (key == "env.dense_objects") cfg.env.dense_object_count = static_cast<int>(to_long(key, value));

    else if (key == "bonus.alpha") cfg.bonus.alpha = to_double(key, value);
    else if (key == "bonus.beta") cfg.bonus.beta = to_double(key, value);
    else if (key == "bonus.novelty_threshold") cfg.bonus.novelty_threshold = to_double(key, value);
    else if (key == "bonus.capacity") cfg.bonus.capacity = static_cast<int>(to_long(key, value));
    else if (key == "bonus.aggregation") {
      if (value == "max") cfg.bonus.aggregation.kind = AggregationKind::kMax;
      else if (value == "percentile") cfg.bonus.aggregation.kind = AggregationKind::kPercentile;
      else if (value == "kth_largest") cfg.bonus.aggregation.kind = AggregationKind::kKthLargest;
      else throw ConfigError("config: bonus.aggregation must be max|percentile|kth_largest");
    } else if (key == "bonus.percentile") cfg.bonus.aggregation.percentile = static_cast<int>(to_long(key, value));
    else if (key == "bonus.kth_largest") cfg.bonus.aggregation.kth_largest = static_cast<int>(to_long(key, value));

    else if (key == "ppo.learning_rate") cfg.ppo.learning_rate = to_double(key, value);
    else if (key == "ppo.entropy_coef") cfg.ppo.entropy_coef = to_double(key, value);
    else if (key == "ppo.discount_gamma") cfg.ppo.discount_gamma = to_double(key, value);
    else if (key == "ppo.gae_lambda") cfg.ppo.gae_lambda = to_double(key, value);
    else if (key == "ppo.clip_epsilon") cfg.ppo.clip_epsilon = to_double(key, value);
    else if (key == "ppo.epochs") cfg.ppo.epochs = static_cast<int>(to_long(key, value));
    else if (key == "ppo.minibatch") cfg.ppo.minibatch_size = static_cast<int>(to_long(key, value));
    else if (key == "ppo.horizon") cfg.ppo.horizon = static_cast<int>(to_long(key, value));
    else if (key == "ppo.task_reward_scale") cfg.ppo.task_reward_scale = to_double(key, value);

    else if (key == "rnet.k") cfg.rnet.k = static_cast<int>(to_long(key, value));
    else if (key == "rnet.gap_multiplier") cfg.rnet.gap_multiplier = to_double(key, value);
    else if (key == "rnet.pairs_per_episode") cfg.rnet.pairs_per_episode = static_cast<int>(to_long(key, value));
    else if (key == "rnet.offline_budget") cfg.rnet.offline_budget = to_long(key, value);
    else if (key == "rnet.val_fraction") cfg.rnet.val_fraction = to_double(key, value);
    else if (key == "rnet.epochs") cfg.rnet.train.epochs = static_cast<int>(to_long(key, value));
    else if (key == "rnet.batch") cfg.rnet.train.batch_size = static_cast<int>(to_long(key, value));
    else if (key == "rnet.learning_rate") cfg.rnet.train.learning_rate = to_double(key, value);
    else if (key == "rnet.hidden") cfg.rnet.train.hidden = static_cast<int>(to_long(key, value));
    else if (key == "rnet.embedding_dim") cfg.rnet.train.embedding_dim = static_cast<int>(to_long(key, value));
    else if (key == "rnet.comparator") cfg.rnet.train.comparator = comparator_from_name(value);
    else if (key == "rnet.shared") cfg.rnet.train.shared_branches = to_bool(key, value);
    else if (key == "rnet.train_embedding") cfg.rnet.train.train_embedding = to_bool(key, value);
    else if (key == "rnet.checkpoint") cfg.rnet.checkpoint = value;
    else if (key == "rnet.untrained") cfg.rnet.untrained = to_bool(key, value);
    else if (key == "rnet.online_interval") cfg.rnet.online_interval = to_long(key, value);
    else if (key == "rnet.online_replay") cfg.rnet.online_replay = to_long(key, value);
    else if (key == "rnet.online_epochs") cfg.rnet.online_epochs = static_cast<int>(to_long(key, value));

    else if (key == "icm.embedding_dim") cfg.icm.embedding_dim = static_cast<int>(to_long(key, value));
    else if (key == "icm.hidden") cfg.icm.hidden = static_cast<int>(to_long(key, value));
    else if (key == "icm.ratio") cfg.icm.forward_inverse_ratio = to_double(key, value);
    else if (key == "icm.bonus_scale") cfg.icm.bonus_scale = to_double(key, value);
    else if (key == "icm.learning_rate") cfg.icm.learning_rate = to_double(key, value);

    else if (key == "grid_oracle.cell_size") cfg.grid_cell_size = static_cast<int>(to_long(key, value));
    else if (key == "grid_oracle.weight") cfg.grid_weight = to_double(key, value);

    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_from_kv(parse_kv_file(path));
}

}  // namespace ecmaze

#include "ecmaze/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "ecmaze/checkpoint.hpp"
#include "ecmaze/curiosity.hpp"
#include "ecmaze/env.hpp"
#include "ecmaze/grid_oracle.hpp"
#include "ecmaze/icm.hpp"
#include "ecmaze/ppo.hpp"

namespace ecmaze {

namespace {

// Stream tags for the per-seed RNG forest.
constexpr std::uint64_t kSaltCollectEp = 0x10;
constexpr std::uint64_t kSaltCollectActions = 0x11;
constexpr std::uint64_t kSaltMine = 0x12;
constexpr std::uint64_t kSaltRnetInit = 0x13;
constexpr std::uint64_t kSaltRnetTrain = 0x14;
constexpr std::uint64_t kSaltPolicyInit = 0x20;
constexpr std::uint64_t kSaltPolicyRng = 0x21;
constexpr std::uint64_t kSaltEpisode = 0x22;
constexpr std::uint64_t kSaltEvict = 0x30;
constexpr std::uint64_t kSaltIcmInit = 0x31;

Tensor flatten(const Tensor& t) {
  return Tensor::from({static_cast<int>(t.size())},
                      std::vector<double>(t.data(), t.data() + t.size()));
}

double value_of(const PolicyNet& net, const Tensor& obs) {
  Tensor row = Tensor::from({1, static_cast<int>(obs.size())},
                            std::vector<double>(obs.data(), obs.data() + obs.size()));
  Tensor logits, values;
  policy_forward(net, row, logits, values);
  return values.at(0, 0);
}

struct EpisodeAccum {
  double task_reward = 0.0;
  double bonus_sum = 0.0;
  long bonus_steps = 0;
  long insertions = 0;
  long switch_count = 0;
  long steps = 0;
  std::set<std::pair<int, int>> cells;

  void reset() { *this = EpisodeAccum{}; }
};

struct TrajectoryRecorder {
  bool active = false;
  bool done = false;
  std::uint64_t episode_seed = 0;
  Cell spawn{};
  int heading = 0;
  std::string maze_text;
  struct Row {
    long step;
    int action;
    Cell pos;
    double reward;
    bool done;
  };
  std::vector<Row> steps;
};

void kv_line(std::ostream& out, const std::string& key, const std::string& v) {
  out << "# " << key << "=" << v << "\n";
}

std::string task_name(Task t) {
  switch (t) {
    case Task::kDense: return "dense";
    case Task::kSparse: return "sparse";
    case Task::kVerySparse: return "very_sparse";
    case Task::kNoReward: return "no_reward";
  }
  return "?";
}

std::string tv_name(TvVariant::Kind k) {
  switch (k) {
    case TvVariant::kNone: return "none";
    case TvVariant::kImageAction: return "image_action";
    case TvVariant::kNoise: return "noise";
    case TvVariant::kNoiseAction: return "noise_action";
  }
  return "?";
}

void write_trajectory(const std::string& path, const EnvConfig& env,
                      const TrajectoryRecorder& rec) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "# ecmaze-trajectory v1\n";
  kv_line(out, "env.task", task_name(env.task.task));
  kv_line(out, "env.tv", tv_name(env.task.tv.kind));
  kv_line(out, "env.tv_images", std::to_string(env.task.tv.image_count));
  kv_line(out, "env.episode_length", std::to_string(env.task.episode_length));
  kv_line(out, "env.min_spawn_goal_distance",
          std::to_string(env.task.min_spawn_goal_distance));
  kv_line(out, "env.width", std::to_string(env.width));
  kv_line(out, "env.height", std::to_string(env.height));
  kv_line(out, "env.texture_count", std::to_string(env.texture_count));
  kv_line(out, "env.window", std::to_string(env.window));
  kv_line(out, "env.include_fire", env.include_fire ? "1" : "0");
  kv_line(out, "env.dense_objects", std::to_string(env.dense_object_count));
  kv_line(out, "episode_seed", std::to_string(rec.episode_seed));
  kv_line(out, "spawn", std::to_string(rec.spawn.x) + "," + std::to_string(rec.spawn.y));
  kv_line(out, "heading", std::to_string(rec.heading));
  out << "# maze:\n";
  std::stringstream maze(rec.maze_text);
  std::string line;
  while (std::getline(maze, line)) out << "# " << line << "\n";
  out << "step,action,x,y,reward,done\n";
  for (const auto& r : rec.steps) {
    out << r.step << ',' << r.action << ',' << r.pos.x << ',' << r.pos.y << ','
        << format_double(r.reward) << ',' << (r.done ? 1 : 0) << '\n';
  }
}

double window_mean(const std::vector<MetricsRow>& rows, long budget,
                   double (*get)(const MetricsRow&)) {
  std::vector<double> vals;
  const long lo = budget - budget / 10;
  for (const auto& r : rows) {
    if (r.env_step > lo) {
      const double v = get(r);
      if (!std::isnan(v)) vals.push_back(v);
    }
  }
  if (vals.empty() && !rows.empty()) {
    const double v = get(rows.back());
    if (!std::isnan(v)) vals.push_back(v);
  }
  return mean_of(vals);
}

}  // namespace

int worker_slots() {
  if (const char* env = std::getenv("ECMAZE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1 && n <= 64) return n;
  }
  return 1;
}

std::shared_ptr<TrajectoryStore> collect_random_trajectories(
    const EnvConfig& env_config, long budget, std::uint64_t seed) {
  auto store = std::make_shared<TrajectoryStore>();
  Env env(env_config);
  const std::uint64_t ep_base = derive_seed(seed, kSaltCollectEp);
  Rng action_rng(derive_seed(seed, kSaltCollectActions));
  long collected = 0;
  long episode = 0;
  while (collected < budget) {
    env.reset(derive_seed(ep_base, episode++));
    std::vector<Tensor> traj;
    traj.push_back(flatten(env.obs()));
    while (!env.done() && collected < budget) {
      env.step(action_rng.uniform_int(env.action_count()));
      traj.push_back(flatten(env.obs()));
      ++collected;
    }
    store->push_back(std::move(traj));
  }
  return store;
}

TrainRnetResult train_rnet_offline(const ExperimentConfig& config,
                                   std::uint64_t seed,
                                   const std::string& out_dir) {
  const RnetOptions& opt = config.rnet;
  const long budget = std::min(opt.offline_budget, config.total_budget);
  auto store = collect_random_trajectories(config.env, budget, seed);

  Rng mine_rng(derive_seed(seed, kSaltMine));
  PairDataset all = mine_pairs(store, opt.k, opt.gap_multiplier,
                               opt.pairs_per_episode, mine_rng);
  auto [train, val] = split_random(all, opt.val_fraction, mine_rng);

  RnetTrainer trainer(static_cast<int>((*store)[0][0].size()), opt.train,
                      Rng(derive_seed(seed, kSaltRnetInit)));
  Rng train_rng(derive_seed(seed, kSaltRnetTrain));
  TrainRnetResult result;
  result.log = trainer.train_epochs(train, val, opt.train.epochs, train_rng);
  result.net = std::move(trainer.net());
  result.collected_steps = budget;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    result.checkpoint_path =
        (std::filesystem::path(out_dir) / "rnet.txt").string();
    save_rnetwork(result.checkpoint_path, result.net, budget);
    std::ofstream log((std::filesystem::path(out_dir) / "rnet_training.csv").string(),
                      std::ios::trunc);
    log << "# ecmaze-rnet-training v1\nepoch,train_loss,val_accuracy\n";
    for (const auto& e : result.log) {
      log << e.epoch << ',' << format_double(e.train_loss) << ','
          << format_double(e.val_accuracy) << '\n';
    }
  }
  return result;
}

SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedOutcome outcome;
  outcome.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::string mname = method_name(cfg.method);
    const bool uses_ec =
        cfg.method == Method::kPpoEc || cfg.method == Method::kPpoEco;
    const bool online = cfg.method == Method::kPpoEco;

    Env env(cfg.env);
    const int obs_dim =
        obs_channel::kCount * cfg.env.window * cfg.env.window;
    long env_steps = 0;

    // Offline R-network phase.
    std::shared_ptr<RNetwork> rnet;
    std::unique_ptr<RnetTrainer> online_trainer;
    double last_val_acc = std::nan("");
    bool val_acc_fresh = false;
    long rnet_collected = 0;

    if (uses_ec) {
      if (online) {
        online_trainer = std::make_unique<RnetTrainer>(
            obs_dim, cfg.rnet.train, Rng(derive_seed(seed, kSaltRnetInit)));
        rnet = std::shared_ptr<RNetwork>(&online_trainer->net(),
                                         [](RNetwork*) {});
      } else if (cfg.rnet.untrained) {
        Rng init(derive_seed(seed, kSaltRnetInit));
        rnet = std::make_shared<RNetwork>(make_rnetwork(
            obs_dim, cfg.rnet.train.embedding_dim, cfg.rnet.train.hidden,
            cfg.rnet.train.comparator, cfg.rnet.train.shared_branches, init));
      } else if (!cfg.rnet.checkpoint.empty()) {
        LoadedRnet loaded = load_rnetwork(cfg.rnet.checkpoint);
        env_steps += loaded.collected_steps;  // honest budget shift
        rnet_collected = loaded.collected_steps;
        rnet = std::make_shared<RNetwork>(std::move(loaded.net));
      } else {
        TrainRnetResult tr = train_rnet_offline(cfg, seed, "");
        env_steps += tr.collected_steps;
        rnet_collected = tr.collected_steps;
        last_val_acc = tr.log.empty() ? std::nan("") : tr.log.back().val_accuracy;
        val_acc_fresh = true;
        rnet = std::make_shared<RNetwork>(std::move(tr.net));
      }
      if (env_steps >= cfg.total_budget) outcome.truncated = true;
    }

    std::optional<CuriosityModule> curiosity;
    if (uses_ec) {
      curiosity.emplace(rnet, cfg.bonus, derive_seed(seed, kSaltEvict));
    }
    std::optional<Icm> icm;
    if (cfg.method == Method::kPpoIcm) {
      icm.emplace(obs_dim, env.action_count(), cfg.icm,
                  Rng(derive_seed(seed, kSaltIcmInit)));
    }
    std::optional<GridOracle> grid;
    if (cfg.method == Method::kPpoGridOracle) {
      grid.emplace(cfg.grid_cell_size, cfg.grid_weight);
    }

    PpoLearner learner(obs_dim, env.action_count(), cfg.ppo,
                       Rng(derive_seed(seed, kSaltPolicyInit)));
    Rng policy_rng(derive_seed(seed, kSaltPolicyRng));

    const std::uint64_t ep_base = derive_seed(seed, kSaltEpisode);
    long episode_index = 0;
    EpisodeAccum ep;
    const int tv_switch = env.tv_switch_action();
    const bool track_cells = cfg.env.position_access;

    // Online retraining state.
    std::deque<std::vector<Tensor>> replay;
    long replay_size = 0;
    std::vector<Tensor> segment;
    long next_retrain = cfg.rnet.online_interval;
    Rng online_mine_rng(derive_seed(seed, kSaltMine));
    Rng online_train_rng(derive_seed(seed, kSaltRnetTrain));

    std::ofstream bonus_log;
    if (cfg.bonus_log && !cfg.out_dir.empty() &&
        (uses_ec || icm || grid)) {
      std::filesystem::create_directories(cfg.out_dir);
      bonus_log.open((std::filesystem::path(cfg.out_dir) /
                      ("bonus_log_seed" + std::to_string(seed) + ".csv"))
                         .string(),
                     std::ios::trunc);
      bonus_log << "# ecmaze-bonus-log v1\n"
                << "method,seed,env_step,score,bonus,inserted,memory_size\n";
    }

    TrajectoryRecorder recorder;
    recorder.active = cfg.dump_trajectories && !cfg.out_dir.empty();

    auto begin_episode = [&]() {
      const std::uint64_t es = derive_seed(ep_base, episode_index++);
      env.reset(es);
      ep.reset();
      if (track_cells) {
        const Cell c = env.oracle_position();
        ep.cells.insert({c.x, c.y});
      }
      if (curiosity) {
        curiosity->episode_reset();
        // Seed the memory with the first observation of the episode.
        auto info = curiosity->ec_step(flatten(env.obs()));
        ep.insertions += info.inserted ? 1 : 0;
      }
      if (grid) grid->episode_reset();
      if (online) segment.assign(1, flatten(env.obs()));
      if (recorder.active && !recorder.done && recorder.steps.empty()) {
        recorder.episode_seed = es;
        recorder.spawn = env.oracle_position();
        recorder.heading = env.heading();
        recorder.maze_text = maze_to_text(env.maze());
      }
    };

    auto finish_episode = [&]() {
      MetricsRow row;
      row.method = mname;
      row.seed = seed;
      row.env_step = env_steps;
      row.episode = episode_index - 1;
      row.task_reward = ep.task_reward;
      row.coverage = track_cells ? static_cast<double>(ep.cells.size())
                                 : std::nan("");
      row.mean_bonus = ep.bonus_steps > 0
                           ? ep.bonus_sum / static_cast<double>(ep.bonus_steps)
                           : 0.0;
      row.insertions = static_cast<double>(ep.insertions);
      row.tv_switch_frac =
          ep.steps > 0 && tv_switch >= 0
              ? static_cast<double>(ep.switch_count) / static_cast<double>(ep.steps)
              : 0.0;
      row.rnet_val_acc = val_acc_fresh ? last_val_acc : std::nan("");
      val_acc_fresh = false;
      outcome.rows.push_back(std::move(row));
      if (online) {
        replay_size += static_cast<long>(segment.size());
        replay.push_back(std::move(segment));
        segment.clear();
        while (replay_size > cfg.rnet.online_replay && replay.size() > 1) {
          replay_size -= static_cast<long>(replay.front().size());
          replay.pop_front();
        }
      }
      if (recorder.active && !recorder.done && !recorder.steps.empty()) {
        write_trajectory((std::filesystem::path(cfg.out_dir) /
                          ("traj_seed" + std::to_string(seed) + ".txt"))
                             .string(),
                         cfg.env, recorder);
        recorder.done = true;
      }
    };

    auto maybe_retrain_online = [&]() {
      if (!online || env_steps < next_retrain) return;
      next_retrain += cfg.rnet.online_interval;
      if (replay.empty()) return;
      auto store = std::make_shared<TrajectoryStore>(replay.begin(), replay.end());
      PairDataset mined =
          mine_pairs(store, cfg.rnet.k, cfg.rnet.gap_multiplier,
                     cfg.rnet.pairs_per_episode, online_mine_rng);
      if (mined.items.empty()) return;
      auto [train, val] =
          split_random(mined, cfg.rnet.val_fraction, online_mine_rng);
      if (train.items.empty()) return;
      auto log = online_trainer->train_epochs(train, val, cfg.rnet.online_epochs,
                                              online_train_rng);
      if (!log.empty()) {
        last_val_acc = log.back().val_accuracy;
        val_acc_fresh = true;
      }
      curiosity->refresh_comparator_cache();
    };

    if (env_steps < cfg.total_budget) begin_episode();

    while (env_steps < cfg.total_budget) {
      RolloutBuffer rollout;
      for (int h = 0; h < cfg.ppo.horizon; ++h) {
        Tensor obs_t = flatten(env.obs());
        const ActResult act = policy_act(learner.net(), obs_t, policy_rng);
        const auto sr = env.step(act.action);
        const Tensor obs_next = flatten(env.obs());

        double bonus = 0.0;
        double score = std::nan("");
        bool inserted = false;
        int memory_size = 0;
        if (curiosity) {
          const auto info = curiosity->ec_step(obs_next);
          bonus = info.bonus;
          score = info.score;
          inserted = info.inserted;
          memory_size = info.memory_size;
          ep.insertions += inserted ? 1 : 0;
        } else if (icm) {
          bonus = icm->bonus(obs_t, act.action, obs_next);
        } else if (grid) {
          bonus = grid->bonus(env.oracle_position());
        }
        if (curiosity || icm || grid) {
          ep.bonus_sum += bonus;
          ++ep.bonus_steps;
        }

        ++env_steps;
        ++ep.steps;
        ep.task_reward += sr.reward;
        if (track_cells) {
          const Cell c = env.oracle_position();
          ep.cells.insert({c.x, c.y});
        }
        if (tv_switch >= 0 && act.action == tv_switch) ++ep.switch_count;
        if (online) segment.push_back(obs_next);

        if (bonus_log.is_open()) {
          bonus_log << mname << ',' << seed << ',' << env_steps << ','
                    << format_double(score) << ',' << format_double(bonus)
                    << ',' << (inserted ? 1 : 0) << ',' << memory_size << '\n';
        }
        if (recorder.active && !recorder.done) {
          recorder.steps.push_back({ep.steps - 1, act.action,
                                    env.oracle_position(), sr.reward, sr.done});
        }

        rollout.add(std::move(obs_t), act.action, act.logprob, act.value,
                    sr.reward, bonus, cfg.ppo.task_reward_scale, sr.done);

        if (sr.done) {
          finish_episode();
          begin_episode();
        }
        maybe_retrain_online();
      }
      rollout.bootstrap_value = value_of(learner.net(), flatten(env.obs()));
      learner.update(rollout, policy_rng);

      if (icm) {
        // One pass over the rollout's transitions; boundary and final
        // transitions have no stored successor and are skipped.
        std::vector<IcmTransition> batch;
        batch.reserve(cfg.icm.batch_size);
        for (int t = 0; t + 1 < rollout.size(); ++t) {
          if (rollout.dones[t]) continue;
          batch.push_back({&rollout.obs[t], rollout.actions[t],
                           &rollout.obs[t + 1]});
          if (static_cast<int>(batch.size()) == cfg.icm.batch_size) {
            icm->train_minibatch(batch);
            batch.clear();
          }
        }
        if (!batch.empty()) icm->train_minibatch(batch);
      }
    }

    outcome.env_steps_used = env_steps;
    outcome.final_task_reward = window_mean(
        outcome.rows, cfg.total_budget,
        [](const MetricsRow& r) { return r.task_reward; });
    outcome.final_coverage = window_mean(
        outcome.rows, cfg.total_budget,
        [](const MetricsRow& r) { return r.coverage; });
    outcome.final_mean_bonus = window_mean(
        outcome.rows, cfg.total_budget,
        [](const MetricsRow& r) { return r.mean_bonus; });
    outcome.final_tv_switch_frac = window_mean(
        outcome.rows, cfg.total_budget,
        [](const MetricsRow& r) { return r.tv_switch_frac; });
    outcome.rnet_val_acc = last_val_acc;

    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      const std::filesystem::path dir(cfg.out_dir);
      save_policy((dir / ("policy_seed" + std::to_string(seed) + ".txt")).string(),
                  learner.net());
      if (uses_ec) {
        save_rnetwork((dir / ("rnet_seed" + std::to_string(seed) + ".txt")).string(),
                      *rnet, rnet_collected);
      }
    }
  } catch (const TrainingError& e) {
    outcome.failed = true;
    outcome.error = e.what();
  }
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return outcome;
}

std::vector<double> RunResult::final_coverages() const {
  std::vector<double> v;
  for (const auto& s : seeds) {
    if (!s.failed) v.push_back(s.final_coverage);
  }
  return v;
}

std::vector<double> RunResult::final_task_rewards() const {
  std::vector<double> v;
  for (const auto& s : seeds) {
    if (!s.failed) v.push_back(s.final_task_reward);
  }
  return v;
}

std::vector<double> RunResult::final_tv_switch_fracs() const {
  std::vector<double> v;
  for (const auto& s : seeds) {
    if (!s.failed) v.push_back(s.final_tv_switch_frac);
  }
  return v;
}

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  result.config = config;
  result.seeds.resize(config.seeds.size());

  const int slots =
      std::min<int>(worker_slots(), static_cast<int>(config.seeds.size()));
  if (slots <= 1) {
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
      result.seeds[i] = run_seed(config, config.seeds[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < slots; ++w) {
      workers.emplace_back([&]() {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= config.seeds.size()) return;
          result.seeds[i] = run_seed(config, config.seeds[i]);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  // Deterministic merge: seeds in config order would depend on the caller's
  // ordering, so sort by seed value.
  std::sort(result.seeds.begin(), result.seeds.end(),
            [](const SeedOutcome& a, const SeedOutcome& b) { return a.seed < b.seed; });

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);

    std::vector<MetricsRow> all_rows;
    for (const auto& s : result.seeds) {
      all_rows.insert(all_rows.end(), s.rows.begin(), s.rows.end());
    }
    write_metrics_csv((dir / "metrics.csv").string(), all_rows);

    const std::string m = method_name(config.method);
    std::vector<SummaryRow> summary;
    auto add = [&](const char* name, std::vector<double> vals) {
      std::vector<double> clean;
      for (double v : vals) {
        if (!std::isnan(v)) clean.push_back(v);
      }
      summary.push_back({m, name, mean_of(clean), stddev_of(clean),
                         static_cast<int>(clean.size())});
    };
    add("final_task_reward", result.final_task_rewards());
    add("final_coverage", result.final_coverages());
    add("final_tv_switch_frac", result.final_tv_switch_fracs());
    {
      std::vector<double> acc;
      for (const auto& s : result.seeds) {
        if (!s.failed) acc.push_back(s.rnet_val_acc);
      }
      add("rnet_val_acc", acc);
    }
    write_summary_csv((dir / "summary.csv").string(), summary);

    std::ofstream timing((dir / "timing.csv").string(), std::ios::trunc);
    timing << "# ecmaze-timing v1 (excluded from the determinism contract)\n"
           << "seed,wall_seconds,env_steps,status\n";
    for (const auto& s : result.seeds) {
      timing << s.seed << ',' << format_double(s.wall_seconds) << ','
             << s.env_steps_used << ','
             << (s.failed ? "failed" : (s.truncated ? "truncated" : "ok"))
             << '\n';
    }
  }
  return result;
}

ReplayReport replay_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("replay: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# ecmaze-trajectory v1") {
    throw IoError("replay: bad trajectory header in " + path);
  }
  KvConfig kv;
  std::uint64_t episode_seed = 0;
  Cell spawn{};
  int heading = -1;
  while (std::getline(in, line)) {
    if (line.rfind("# maze:", 0) == 0) continue;
    if (line.rfind("# #", 0) == 0 || line.rfind("# .", 0) == 0 ||
        line.rfind("# G", 0) == 0) {
      continue;  // maze art
    }
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "episode_seed") episode_seed = std::stoull(value);
      else if (key == "spawn") {
        const auto comma = value.find(',');
        spawn = {std::stoi(value.substr(0, comma)), std::stoi(value.substr(comma + 1))};
      } else if (key == "heading") heading = std::stoi(value);
      else kv[key] = value;
      continue;
    }
    break;  // header row of the CSV body
  }
  if (line != "step,action,x,y,reward,done") {
    throw IoError("replay: missing step header in " + path);
  }

  // Only env.* keys matter here; reuse the experiment parser.
  KvConfig env_kv;
  for (const auto& [k, v] : kv) {
    if (k.rfind("env.", 0) == 0) env_kv[k] = v;
  }
  ExperimentConfig cfg = experiment_from_kv(env_kv);

  Env env(cfg.env);
  env.reset(episode_seed);
  if (!(env.oracle_position() == spawn) || env.heading() != heading) {
    throw UsageError("replay: spawn/heading mismatch (wrong seed or config?)");
  }
  ReplayReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    std::getline(ss, field, ',');
    const int action = std::stoi(field);
    std::getline(ss, field, ',');
    const int x = std::stoi(field);
    std::getline(ss, field, ',');
    const int y = std::stoi(field);
    std::getline(ss, field, ',');
    const double reward = std::stod(field);
    std::getline(ss, field);
    const bool done = field == "1";
    const auto sr = env.step(action);
    const Cell pos = env.oracle_position();
    if (pos.x != x || pos.y != y || sr.reward != reward || sr.done != done) {
      throw UsageError("replay: divergence at step " +
                       std::to_string(report.steps));
    }
    ++report.steps;
    report.total_reward += sr.reward;
  }
  return report;
}

}  // namespace ecmaze

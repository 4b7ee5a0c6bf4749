#include "ecmaze/ablation.hpp"

#include <filesystem>
#include <fstream>

#include "ecmaze/env.hpp"

namespace ecmaze {

namespace {

void append_run(AblationResult& out, const std::string& setting,
                const RunResult& run, const char* metric) {
  for (const auto& s : run.seeds) {
    if (s.failed) continue;
    out.rows.push_back({setting, s.seed, metric, s.final_coverage});
  }
}

ExperimentConfig with_subdir(ExperimentConfig cfg, const std::string& suite,
                             const std::string& setting) {
  if (!cfg.out_dir.empty()) {
    cfg.out_dir = (std::filesystem::path(cfg.out_dir) / suite / setting).string();
  }
  return cfg;
}

}  // namespace

std::vector<std::string> ablation_suites() {
  return {"threshold_k", "memory_size", "rnet_budget", "random_embedding",
          "branch_sharing"};
}

AblationResult run_ablation(const std::string& suite,
                            const ExperimentConfig& base) {
  AblationResult out;
  out.suite = suite;

  if (suite == "threshold_k") {
    for (int k : {2, 3, 4, 5, 7, 10}) {
      ExperimentConfig cfg = with_subdir(base, suite, "k" + std::to_string(k));
      cfg.method = Method::kPpoEc;
      cfg.rnet.k = k;
      append_run(out, "k=" + std::to_string(k), run_experiment(cfg),
                 "final_coverage");
    }
  } else if (suite == "memory_size") {
    for (int cap : {100, 200, 350, 500}) {
      ExperimentConfig cfg = with_subdir(base, suite, "K" + std::to_string(cap));
      cfg.method = Method::kPpoEc;
      cfg.bonus.capacity = cap;
      append_run(out, "K=" + std::to_string(cap), run_experiment(cfg),
                 "final_coverage");
    }
  } else if (suite == "rnet_budget") {
    for (long budget : {25000L, 50000L, 100000L, 200000L}) {
      ExperimentConfig cfg =
          with_subdir(base, suite, "b" + std::to_string(budget));
      cfg.method = Method::kPpoEc;
      cfg.rnet.offline_budget = budget;
      append_run(out, "budget=" + std::to_string(budget), run_experiment(cfg),
                 "final_coverage");
    }
  } else if (suite == "random_embedding") {
    {
      ExperimentConfig cfg = with_subdir(base, suite, "full_ec");
      cfg.method = Method::kPpoEc;
      append_run(out, "full_ec", run_experiment(cfg), "final_coverage");
    }
    {
      ExperimentConfig cfg = with_subdir(base, suite, "random_embedding");
      cfg.method = Method::kPpoEc;
      cfg.rnet.train.train_embedding = false;
      append_run(out, "random_embedding", run_experiment(cfg), "final_coverage");
    }
    {
      ExperimentConfig cfg = with_subdir(base, suite, "no_comparator");
      cfg.method = Method::kPpoEc;
      cfg.rnet.untrained = true;
      cfg.rnet.train.comparator = ComparatorKind::kDotSigmoid;
      cfg.rnet.train.shared_branches = true;
      append_run(out, "no_comparator", run_experiment(cfg), "final_coverage");
    }
    {
      ExperimentConfig cfg = with_subdir(base, suite, "ppo");
      cfg.method = Method::kPpo;
      append_run(out, "ppo", run_experiment(cfg), "final_coverage");
    }
  } else if (suite == "branch_sharing") {
    struct Variant {
      const char* name;
      bool shared;
      ComparatorKind comparator;
    };
    const Variant variants[] = {
        {"shared_concat", true, ComparatorKind::kConcatMlp},
        {"unshared_concat", false, ComparatorKind::kConcatMlp},
        {"shared_dot", true, ComparatorKind::kDotSigmoid},
        {"unshared_dot", false, ComparatorKind::kDotSigmoid},
    };
    for (std::uint64_t seed : base.seeds) {
      // One shared data collection per seed; variants train on it.
      auto store = collect_random_trajectories(
          base.env, std::min(base.rnet.offline_budget, base.total_budget), seed);
      Rng mine_rng(derive_seed(seed, 0x12));
      PairDataset mined = mine_pairs(store, base.rnet.k, base.rnet.gap_multiplier,
                                     base.rnet.pairs_per_episode, mine_rng);
      auto [train, val] =
          split_random(mined, base.rnet.val_fraction, mine_rng);
      for (const Variant& v : variants) {
        RnetTrainConfig tc = base.rnet.train;
        tc.shared_branches = v.shared;
        tc.comparator = v.comparator;
        RnetTrainer trainer(static_cast<int>(train.first(0).size()), tc,
                            Rng(derive_seed(seed, 0x13)));
        Rng train_rng(derive_seed(seed, 0x14));
        auto log = trainer.train_epochs(train, val, tc.epochs, train_rng);
        out.rows.push_back(
            {v.name, seed, "val_accuracy", log.back().val_accuracy});
      }
    }
  } else {
    std::string list;
    for (const auto& s : ablation_suites()) list += (list.empty() ? "" : ", ") + s;
    throw UsageError("unknown ablation suite '" + suite + "'; suites: " + list);
  }

  if (!base.out_dir.empty()) {
    std::filesystem::create_directories(base.out_dir);
    out.csv_path = (std::filesystem::path(base.out_dir) /
                    ("ablation_" + suite + ".csv"))
                       .string();
    std::ofstream csv(out.csv_path, std::ios::trunc);
    csv << "# ecmaze-ablation v1\nsuite,setting,seed,metric,value\n";
    for (const auto& r : out.rows) {
      csv << suite << ',' << r.setting << ',' << r.seed << ',' << r.metric
          << ',' << format_double(r.value) << '\n';
    }
  }
  return out;
}

}  // namespace ecmaze

// Command-line front end: train-rnet, run, ablate, plot, replay.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "ecmaze/ablation.hpp"
#include "ecmaze/config.hpp"
#include "ecmaze/experiment.hpp"
#include "ecmaze/kernels.hpp"
#include "ecmaze/metrics.hpp"
#include "ecmaze/svgplot.hpp"

namespace {

using ecmaze::ExperimentConfig;

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  ecmaze::KvConfig kv = ecmaze::parse_kv_file(path);
  for (const auto& o : overrides) ecmaze::apply_override(kv, o);
  return ecmaze::experiment_from_kv(kv);
}

int fail(const std::string& category, const std::string& message) {
  nlohmann::json err;
  err["error"] = category;
  err["message"] = message;
  std::cerr << err.dump() << "\n";
  return 1;
}

void print_run_summary(const ecmaze::RunResult& result) {
  using ecmaze::format_double;
  const auto coverage = result.final_coverages();
  const auto reward = result.final_task_rewards();
  std::printf("method=%s seeds=%zu\n", ecmaze::method_name(result.config.method),
              result.seeds.size());
  std::printf("  final_coverage     %s +- %s\n",
              format_double(ecmaze::mean_of(coverage)).c_str(),
              format_double(ecmaze::stddev_of(coverage)).c_str());
  std::printf("  final_task_reward  %s +- %s\n",
              format_double(ecmaze::mean_of(reward)).c_str(),
              format_double(ecmaze::stddev_of(reward)).c_str());
  for (const auto& s : result.seeds) {
    if (s.failed) {
      std::printf("  seed %llu FAILED: %s\n",
                  static_cast<unsigned long long>(s.seed), s.error.c_str());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Episodic-curiosity maze workbench"};
  app.require_subcommand(1);

  std::string kernels_backend;
  app.add_option("--kernels", kernels_backend,
                 "Force a kernel backend (scalar|avx2)");

  std::string config_path;
  std::vector<std::string> overrides;

  auto* train = app.add_subcommand("train-rnet",
                                   "Collect random-policy data and train the "
                                   "reachability network");
  train->add_option("config", config_path, "key=value config file")->required();
  train->add_option("--set", overrides, "Override config keys (key=value)");

  auto* run = app.add_subcommand("run", "Run a full experiment across seeds");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--set", overrides, "Override config keys (key=value)");

  std::string suite;
  auto* ablate = app.add_subcommand("ablate", "Run an ablation sweep");
  ablate->add_option("suite", suite, "Suite name")->required();
  ablate->add_option("config", config_path, "key=value config file")->required();
  ablate->add_option("--set", overrides, "Override config keys (key=value)");

  std::vector<std::string> csvs;
  std::string plot_out;
  std::vector<std::string> metrics;
  auto* plot = app.add_subcommand("plot", "Render SVG training curves from metrics CSVs");
  plot->add_option("csv", csvs, "metrics.csv files")->required();
  plot->add_option("-o,--out", plot_out, "Output directory")->required();
  plot->add_option("--metric", metrics, "Metric columns to plot (default: all)");

  std::string traj_path;
  auto* replay = app.add_subcommand("replay", "Verify a trajectory dump against the environment");
  replay->add_option("trajectory", traj_path, "Trajectory file")->required();

  CLI11_PARSE(app, argc, argv);

  if (!kernels_backend.empty() && !ecmaze::kernels::set_active(kernels_backend)) {
    return fail("config", "kernel backend unavailable: " + kernels_backend);
  }

  try {
    if (train->parsed()) {
      ExperimentConfig cfg = load_config(config_path, overrides);
      if (cfg.out_dir.empty()) {
        return fail("config", "train-rnet requires out_dir in the config");
      }
      const auto result =
          ecmaze::train_rnet_offline(cfg, cfg.seeds.empty() ? 0 : cfg.seeds[0],
                                     cfg.out_dir);
      std::printf("collected_steps=%ld checkpoint=%s\n", result.collected_steps,
                  result.checkpoint_path.c_str());
      for (const auto& e : result.log) {
        std::printf("epoch=%d train_loss=%s val_accuracy=%s\n", e.epoch,
                    ecmaze::format_double(e.train_loss).c_str(),
                    ecmaze::format_double(e.val_accuracy).c_str());
      }
    } else if (run->parsed()) {
      ExperimentConfig cfg = load_config(config_path, overrides);
      const auto result = ecmaze::run_experiment(cfg);
      print_run_summary(result);
      for (const auto& s : result.seeds) {
        if (s.failed) return fail("training", "seed failed: " + s.error);
      }
    } else if (ablate->parsed()) {
      ExperimentConfig cfg = load_config(config_path, overrides);
      const auto result = ecmaze::run_ablation(suite, cfg);
      std::printf("suite=%s rows=%zu%s%s\n", result.suite.c_str(),
                  result.rows.size(),
                  result.csv_path.empty() ? "" : " csv=",
                  result.csv_path.c_str());
      for (const auto& r : result.rows) {
        std::printf("%s seed=%llu %s=%s\n", r.setting.c_str(),
                    static_cast<unsigned long long>(r.seed), r.metric.c_str(),
                    ecmaze::format_double(r.value).c_str());
      }
    } else if (plot->parsed()) {
      const auto written = ecmaze::emit_plots(csvs, plot_out, metrics);
      for (const auto& p : written) std::printf("%s\n", p.c_str());
    } else if (replay->parsed()) {
      const auto report = ecmaze::replay_trajectory(traj_path);
      std::printf("replay ok: steps=%ld total_reward=%s\n", report.steps,
                  ecmaze::format_double(report.total_reward).c_str());
    }
  } catch (const ecmaze::ConfigError& e) {
    return fail("config", e.what());
  } catch (const ecmaze::UsageError& e) {
    return fail("usage", e.what());
  } catch (const ecmaze::TrainingError& e) {
    return fail("training", e.what());
  } catch (const ecmaze::IoError& e) {
    return fail("io", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}

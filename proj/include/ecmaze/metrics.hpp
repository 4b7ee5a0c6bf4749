#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ecmaze/maze.hpp"

namespace ecmaze {

// metrics.csv schema (versioned in the leading comment line). Wall-clock is
// deliberately NOT here: repeated runs of one (config, seed) must produce
// byte-identical CSVs, so timing goes to a sidecar file.
inline constexpr const char* kMetricsSchemaVersion = "ecmaze-metrics v1";

struct MetricsRow {
  std::string method;
  std::uint64_t seed = 0;
  long env_step = 0;  // cumulative, includes R-network data collection
  long episode = 0;
  double task_reward = 0.0;
  double coverage = 0.0;  // distinct cells visited this episode
  double mean_bonus = 0.0;
  double insertions = 0.0;
  double tv_switch_frac = 0.0;
  double rnet_val_acc = 0.0;  // NaN except on rows after (re)training
};

// %.12g with NaN rendered as an empty field; used everywhere a double is
// serialized so output bytes are reproducible.
std::string format_double(double v);

void write_metrics_csv(const std::string& path,
                       std::span<const MetricsRow> rows);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

struct SummaryRow {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int n = 0;
};
void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows);

// Distinct discretized cells in a position trajectory.
int coverage_metric(std::span<const Cell> positions, int cell_size);

double mean_of(std::span<const double> values);
double stddev_of(std::span<const double> values);  // population std

}  // namespace ecmaze

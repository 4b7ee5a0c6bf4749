#include "ecmaze/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ecmaze/common.hpp"

namespace ecmaze {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

const char* kHeader =
    "method,seed,env_step,episode,task_reward,coverage,mean_bonus,insertions,"
    "tv_switch_frac,rnet_val_acc";

double parse_field(const std::string& s) {
  if (s.empty()) return std::nan("");
  return std::stod(s);
}

}  // namespace

void write_metrics_csv(const std::string& path,
                       std::span<const MetricsRow> rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "# " << kMetricsSchemaVersion << "\n" << kHeader << "\n";
  for (const MetricsRow& r : rows) {
    out << r.method << ',' << r.seed << ',' << r.env_step << ',' << r.episode
        << ',' << format_double(r.task_reward) << ','
        << format_double(r.coverage) << ',' << format_double(r.mean_bonus)
        << ',' << format_double(r.insertions) << ','
        << format_double(r.tv_switch_frac) << ','
        << format_double(r.rnet_val_acc) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ecmaze-metrics", 0) != 0) {
    throw IoError(path + ": missing metrics schema line");
  }
  if (line != std::string("# ") + kMetricsSchemaVersion) {
    throw IoError(path + ": unsupported schema '" + line + "'");
  }
  if (!std::getline(in, line) || line != kHeader) {
    throw IoError(path + ": unexpected header (column mismatch): " + line);
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    MetricsRow r;
    std::getline(ss, r.method, ',');
    std::getline(ss, field, ',');
    r.seed = std::stoull(field);
    std::getline(ss, field, ',');
    r.env_step = std::stol(field);
    std::getline(ss, field, ',');
    r.episode = std::stol(field);
    std::getline(ss, field, ',');
    r.task_reward = parse_field(field);
    std::getline(ss, field, ',');
    r.coverage = parse_field(field);
    std::getline(ss, field, ',');
    r.mean_bonus = parse_field(field);
    std::getline(ss, field, ',');
    r.insertions = parse_field(field);
    std::getline(ss, field, ',');
    r.tv_switch_frac = parse_field(field);
    std::getline(ss, field);
    r.rnet_val_acc = parse_field(field);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(const std::string& path,
                       std::span<const SummaryRow> rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "# ecmaze-summary v1\nmethod,metric,mean,std,n\n";
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << r.metric << ',' << format_double(r.mean) << ','
        << format_double(r.stddev) << ',' << r.n << '\n';
  }
}

int coverage_metric(std::span<const Cell> positions, int cell_size) {
  if (cell_size < 1) throw ConfigError("coverage_metric: cell_size must be >= 1");
  std::set<std::pair<int, int>> cells;
  for (const Cell& p : positions) {
    cells.insert({p.x >= 0 ? p.x / cell_size : (p.x - cell_size + 1) / cell_size,
                  p.y >= 0 ? p.y / cell_size : (p.y - cell_size + 1) / cell_size});
  }
  return static_cast<int>(cells.size());
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return std::nan("");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double stddev_of(std::span<const double> values) {
  if (values.empty()) return std::nan("");
  const double mu = mean_of(values);
  double var = 0.0;
  for (double v : values) var += (v - mu) * (v - mu);
  return std::sqrt(var / static_cast<double>(values.size()));
}

}  // namespace ecmaze

#include "ecmaze/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "ecmaze/common.hpp"

namespace ecmaze {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 520;
constexpr int kLeft = 70;
constexpr int kRight = 190;  // room for the legend
constexpr int kTop = 30;
constexpr int kBottom = 50;
constexpr int kBins = 60;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

double metric_value(const MetricsRow& r, const std::string& name) {
  if (name == "task_reward") return r.task_reward;
  if (name == "coverage") return r.coverage;
  if (name == "mean_bonus") return r.mean_bonus;
  if (name == "insertions") return r.insertions;
  if (name == "tv_switch_frac") return r.tv_switch_frac;
  if (name == "rnet_val_acc") return r.rnet_val_acc;
  throw ConfigError("plot: unknown metric '" + name + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct BandPoint {
  double x;
  double mean;
  double lo;
  double hi;
  int n;
};

}  // namespace

std::vector<std::string> plot_metric_names() {
  return {"task_reward", "coverage",       "mean_bonus",
          "insertions",  "tv_switch_frac", "rnet_val_acc"};
}

std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths,
                                    const std::string& out_dir,
                                    std::vector<std::string> metrics) {
  if (csv_paths.empty()) throw UsageError("plot: no input CSVs");
  std::vector<MetricsRow> rows;
  for (const std::string& p : csv_paths) {
    auto r = read_metrics_csv(p);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const std::vector<std::string> known = plot_metric_names();
  if (metrics.empty()) {
    metrics = known;
  } else {
    for (const std::string& m : metrics) {
      if (std::find(known.begin(), known.end(), m) == known.end()) {
        std::string list;
        for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("plot: unknown metric '" + m +
                          "'; available columns: " + list);
      }
    }
  }

  std::filesystem::create_directories(out_dir);

  long max_step = 1;
  for (const auto& r : rows) max_step = std::max(max_step, r.env_step);

  // method -> seed -> (env_step, value) sorted by step
  using Series = std::map<std::uint64_t, std::vector<std::pair<long, double>>>;

  std::vector<std::string> written;
  for (const std::string& metric : metrics) {
    std::map<std::string, Series> by_method;
    for (const auto& r : rows) {
      const double v = metric_value(r, metric);
      if (std::isnan(v)) continue;
      by_method[r.method][r.seed].push_back({r.env_step, v});
    }
    for (auto& [m, series] : by_method) {
      for (auto& [s, pts] : series) std::sort(pts.begin(), pts.end());
    }

    // Carry-forward resample across kBins bin edges, then aggregate seeds.
    std::map<std::string, std::vector<BandPoint>> bands;
    for (const auto& [m, series] : by_method) {
      std::vector<BandPoint> band;
      for (int b = 0; b < kBins; ++b) {
        const double edge =
            static_cast<double>(max_step) * (b + 1) / static_cast<double>(kBins);
        std::vector<double> vals;
        for (const auto& [s, pts] : series) {
          double last = std::nan("");
          for (const auto& [step, v] : pts) {
            if (static_cast<double>(step) <= edge) last = v;
            else break;
          }
          if (!std::isnan(last)) vals.push_back(last);
        }
        if (vals.empty()) continue;
        const double mu = mean_of(vals);
        const double sd = stddev_of(vals);
        band.push_back({edge, mu, mu - sd, mu + sd, static_cast<int>(vals.size())});
      }
      if (!band.empty()) bands[m] = std::move(band);
    }

    double ymin = 0.0, ymax = 1.0;
    bool have = false;
    for (const auto& [m, band] : bands) {
      for (const auto& p : band) {
        const double lo = p.n > 1 ? p.lo : p.mean;
        const double hi = p.n > 1 ? p.hi : p.mean;
        if (!have) {
          ymin = lo;
          ymax = hi;
          have = true;
        } else {
          ymin = std::min(ymin, lo);
          ymax = std::max(ymax, hi);
        }
      }
    }
    if (!have) {
      ymin = 0.0;
      ymax = 1.0;
    }
    if (ymax - ymin < 1e-12) {
      ymax += 1.0;
      ymin -= 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double px0 = kLeft, px1 = kWidth - kRight;
    const double py0 = kHeight - kBottom, py1 = kTop;
    auto sx = [&](double step) {
      return px0 + (px1 - px0) * step / static_cast<double>(max_step);
    };
    auto sy = [&](double v) {
      return py0 + (py1 - py0) * (v - ymin) / (ymax - ymin);
    };

    std::string path =
        (std::filesystem::path(out_dir) / (metric + ".svg")).string();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("plot: cannot write " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // Axes and ticks.
    out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << fmt(px0) << "\" y1=\"" << fmt(py0) << "\" x2=\""
        << fmt(px1) << "\" y2=\"" << fmt(py0) << "\"/>\n";
    out << "<line x1=\"" << fmt(px0) << "\" y1=\"" << fmt(py0) << "\" x2=\""
        << fmt(px0) << "\" y2=\"" << fmt(py1) << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
      const double step = static_cast<double>(max_step) * i / 5.0;
      const double x = sx(step);
      out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py0) << "\" x2=\""
          << fmt(x) << "\" y2=\"" << fmt(py0 + 5) << "\" stroke=\"#333\"/>\n";
      out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(py0 + 20)
          << "\" text-anchor=\"middle\">" << fmt(step) << "</text>\n";
      const double v = ymin + (ymax - ymin) * i / 5.0;
      const double y = sy(v);
      out << "<line x1=\"" << fmt(px0 - 5) << "\" y1=\"" << fmt(y) << "\" x2=\""
          << fmt(px0) << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n";
      out << "<text x=\"" << fmt(px0 - 8) << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    out << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\""
        << fmt(static_cast<double>(kHeight) - 12)
        << "\" text-anchor=\"middle\">env steps</text>\n";
    out << "<text x=\"18\" y=\"" << fmt((py0 + py1) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt((py0 + py1) / 2) << ")\">" << metric << "</text>\n";
    out << "</g>\n";

    int color = 0;
    for (const auto& [m, band] : bands) {
      const char* c = kPalette[color % 8];
      ++color;
      bool any_band = false;
      for (const auto& p : band) any_band = any_band || p.n > 1;
      if (any_band) {
        out << "<polygon fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (const auto& p : band) out << fmt(sx(p.x)) << ',' << fmt(sy(p.hi)) << ' ';
        for (auto it = band.rbegin(); it != band.rend(); ++it) {
          out << fmt(sx(it->x)) << ',' << fmt(sy(it->lo)) << ' ';
        }
        out << "\"/>\n";
      }
      out << "<polyline fill=\"none\" stroke=\"" << c
          << "\" stroke-width=\"1.8\" points=\"";
      for (const auto& p : band) out << fmt(sx(p.x)) << ',' << fmt(sy(p.mean)) << ' ';
      out << "\"/>\n";
    }

    // Legend: method names exactly as they appear in the CSV.
    int entry = 0;
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    color = 0;
    for (const auto& [m, band] : bands) {
      const char* c = kPalette[color % 8];
      ++color;
      const double y = kTop + 14 + 18 * entry;
      out << "<line x1=\"" << fmt(px1 + 12) << "\" y1=\"" << fmt(y - 4)
          << "\" x2=\"" << fmt(px1 + 34) << "\" y2=\"" << fmt(y - 4)
          << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << fmt(px1 + 40) << "\" y=\"" << fmt(y) << "\">" << m
          << "</text>\n";
      ++entry;
    }
    out << "</g>\n</svg>\n";
    written.push_back(path);
  }
  return written;
}

}  // namespace ecmaze

#pragma once

#include <string>
#include <vector>

#include "ecmaze/metrics.hpp"

namespace ecmaze {

// Renders one SVG per metric into out_dir: x = env steps, y = metric, one
// line per method with a +-std band across seeds (no band for one seed).
// Output bytes are deterministic for identical inputs. An empty `metrics`
// list selects every numeric column; unknown names raise a ConfigError that
// lists the available columns. Returns the written file paths.
std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths,
                                    const std::string& out_dir,
                                    std::vector<std::string> metrics = {});

std::vector<std::string> plot_metric_names();

}  // namespace ecmaze

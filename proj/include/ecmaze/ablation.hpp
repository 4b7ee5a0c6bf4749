#pragma once

#include <string>
#include <vector>

#include "ecmaze/experiment.hpp"

namespace ecmaze {

struct AblationRow {
  std::string setting;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
};

struct AblationResult {
  std::string suite;
  std::vector<AblationRow> rows;
  std::string csv_path;  // empty when base.out_dir is empty
};

std::vector<std::string> ablation_suites();

// Sweeps one knob with everything else fixed at the base config:
//   threshold_k      k in {2,3,4,5,7,10}            (final coverage)
//   memory_size      K in {100,200,350,500}         (final coverage)
//   rnet_budget      budget in {25k,50k,100k,200k}  (final coverage)
//   random_embedding full EC / random embedding / no comparator / plain PPO
//   branch_sharing   {shared,unshared} x {concat_mlp,dot_sigmoid}
//                    (validation accuracy; no policy runs)
// Unknown suite names raise UsageError listing the suites.
AblationResult run_ablation(const std::string& suite,
                            const ExperimentConfig& base);

}  // namespace ecmaze

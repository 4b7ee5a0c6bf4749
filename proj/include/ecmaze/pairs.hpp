#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ecmaze/common.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

enum class PairClass { kPositive, kNegative, kExcluded };

// Label partition for an index gap |i - j| = delta:
// positive when delta <= k, negative when delta > gap_multiplier * k,
// excluded in between. Exactly one holds for every delta.
PairClass classify_pair_gap(long delta, int k, double gap_multiplier);

using TrajectoryStore = std::vector<std::vector<Tensor>>;

// Observation pairs for reachability training. Items reference a shared
// trajectory store instead of copying observations; no pair crosses an
// episode boundary by construction.
struct PairDataset {
  struct Item {
    std::int32_t traj;
    std::int32_t i;  // already order-randomized at mining time
    std::int32_t j;
    std::uint8_t label;
  };

  std::shared_ptr<const TrajectoryStore> store;
  std::vector<Item> items;
  int k = 0;
  double gap_multiplier = 0.0;
  std::string split_tag;
  int skipped_trajectories = 0;

  const Tensor& first(std::size_t idx) const {
    const Item& it = items[idx];
    return (*store)[it.traj][it.i];
  }
  const Tensor& second(std::size_t idx) const {
    const Item& it = items[idx];
    return (*store)[it.traj][it.j];
  }
  std::size_t size() const { return items.size(); }
  std::size_t positives() const;
};

// Samples pairs_per_episode examples per trajectory with a fair label coin,
// then subsamples the majority class down to exact balance. Trajectories
// shorter than gap_multiplier * k + 2 are skipped (counted in
// skipped_trajectories).
PairDataset mine_pairs(std::shared_ptr<const TrajectoryStore> trajectories,
                       int k, double gap_multiplier, int pairs_per_episode,
                       Rng& rng);

// Random pair-level holdout from the mined pool (the default protocol:
// pairs are sampled from one replay buffer, a fraction is held out).
std::pair<PairDataset, PairDataset> split_random(const PairDataset& dataset,
                                                 double val_fraction, Rng& rng);

// Stricter alternative: holds out whole trajectories, so the two splits
// never share an episode (each episode is its own maze).
std::pair<PairDataset, PairDataset> split_by_trajectory(
    const PairDataset& dataset, double val_fraction, Rng& rng);

// Permutes labels across items (control experiment: destroys the signal but
// keeps the class counts).
PairDataset shuffle_labels(const PairDataset& dataset, Rng& rng);

}  // namespace ecmaze

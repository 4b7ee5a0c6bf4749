#include "ecmaze/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <climits>
#include <cstring>
#include <unordered_map>

namespace ecmaze {

PairClass classify_pair_gap(long delta, int k, double gap_multiplier) {
  const long d = std::labs(delta);
  if (d <= k) return PairClass::kPositive;
  if (static_cast<double>(d) > gap_multiplier * k) return PairClass::kNegative;
  return PairClass::kExcluded;
}

std::size_t PairDataset::positives() const {
  std::size_t n = 0;
  for (const Item& it : items) n += it.label;
  return n;
}

namespace {

std::uint64_t obs_hash(const Tensor& t) {
  // FNV-1a over the raw bytes; exact revisits hash identically.
  std::uint64_t h = 1469598103934665603ULL;
  const unsigned char* p = reinterpret_cast<const unsigned char*>(t.data());
  const std::size_t bytes = t.size() * sizeof(double);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

// Occurrence index of identical observations within one trajectory; used to
// reject negatives that have a temporally-close witness pair elsewhere.
struct ObsIndex {
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> occurrences;

  explicit ObsIndex(const std::vector<Tensor>& traj) {
    occurrences.reserve(traj.size());
    for (std::size_t t = 0; t < traj.size(); ++t) {
      occurrences[obs_hash(traj[t])].push_back(static_cast<std::int32_t>(t));
    }
  }

  long min_gap(std::uint64_t ha, std::uint64_t hb) const {
    const auto& a = occurrences.at(ha);
    const auto& b = occurrences.at(hb);
    long best = LONG_MAX;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
      best = std::min(best, std::labs(static_cast<long>(a[ia]) - b[ib]));
      if (a[ia] < b[ib]) ++ia;
      else ++ib;
    }
    return best;
  }
};

}  // namespace

PairDataset mine_pairs(std::shared_ptr<const TrajectoryStore> trajectories,
                       int k, double gap_multiplier, int pairs_per_episode,
                       Rng& rng) {
  if (k < 1) throw ConfigError("mine_pairs: k must be >= 1");
  if (gap_multiplier <= 1.0) {
    throw ConfigError("mine_pairs: gap_multiplier must exceed 1");
  }
  if (pairs_per_episode < 1) {
    throw ConfigError("mine_pairs: pairs_per_episode must be >= 1");
  }
  PairDataset ds;
  ds.store = trajectories;
  ds.k = k;
  ds.gap_multiplier = gap_multiplier;
  ds.split_tag = "all";

  // Smallest gap that counts as negative: the least integer > gap * k.
  const long neg_min = static_cast<long>(std::floor(gap_multiplier * k)) + 1;

  std::vector<PairDataset::Item> positives;
  std::vector<PairDataset::Item> negatives;
  for (std::int32_t t = 0; t < static_cast<std::int32_t>(trajectories->size()); ++t) {
    const auto& traj = (*trajectories)[t];
    const long n = static_cast<long>(traj.size());
    if (static_cast<double>(n) < gap_multiplier * k + 2.0) {
      ++ds.skipped_trajectories;
      continue;
    }
    const ObsIndex index(traj);
    for (int s = 0; s < pairs_per_episode; ++s) {
      const bool positive = rng.chance(0.5);
      long i = -1, j = -1;
      for (int attempt = 0; attempt < 20; ++attempt) {
        long d;
        if (positive) {
          d = 1 + rng.uniform_int(static_cast<int>(std::min<long>(k, n - 1)));
        } else {
          d = neg_min + rng.uniform_int(static_cast<int>(n - neg_min));
        }
        i = rng.uniform_int(static_cast<int>(n - d));
        j = i + d;
        if (!positive) {
          // The walk revisits places; a "temporally far" candidate whose
          // observations also occur within the gap of each other somewhere
          // in the episode is ambiguous, not negative. Resample it.
          if (index.min_gap(obs_hash(traj[i]), obs_hash(traj[j])) <
              static_cast<long>(neg_min)) {
            i = -1;
            continue;
          }
        }
        break;
      }
      if (i < 0) continue;  // no clean candidate found
      if (rng.chance(0.5)) std::swap(i, j);
      PairDataset::Item item{t, static_cast<std::int32_t>(i),
                             static_cast<std::int32_t>(j),
                             static_cast<std::uint8_t>(positive ? 1 : 0)};
      (positive ? positives : negatives).push_back(item);
    }
  }

  // Exact class balance by dropping random items from the majority class.
  auto subsample = [&](std::vector<PairDataset::Item>& v, std::size_t keep) {
    for (std::size_t i = 0; i < keep; ++i) {
      const std::size_t j = i + rng.uniform_int(static_cast<int>(v.size() - i));
      std::swap(v[i], v[j]);
    }
    v.resize(keep);
  };
  const std::size_t keep = std::min(positives.size(), negatives.size());
  if (positives.size() > keep) subsample(positives, keep);
  if (negatives.size() > keep) subsample(negatives, keep);

  ds.items.reserve(positives.size() + negatives.size());
  for (std::size_t i = 0; i < keep; ++i) {
    ds.items.push_back(positives[i]);
    ds.items.push_back(negatives[i]);
  }
  return ds;
}

std::pair<PairDataset, PairDataset> split_random(const PairDataset& dataset,
                                                 double val_fraction, Rng& rng) {
  if (val_fraction < 0.0 || val_fraction >= 1.0) {
    throw ConfigError("split_random: val_fraction must be in [0, 1)");
  }
  std::vector<std::uint32_t> order(dataset.items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const std::size_t j = i + rng.uniform_int(static_cast<int>(order.size() - i));
    std::swap(order[i], order[j]);
  }
  const std::size_t nval = static_cast<std::size_t>(
      std::ceil(val_fraction * static_cast<double>(order.size())));
  PairDataset train = dataset;
  PairDataset val = dataset;
  train.items.clear();
  val.items.clear();
  train.split_tag = "train";
  val.split_tag = "val";
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < nval ? val : train).items.push_back(dataset.items[order[i]]);
  }
  return {std::move(train), std::move(val)};
}

std::pair<PairDataset, PairDataset> split_by_trajectory(
    const PairDataset& dataset, double val_fraction, Rng& rng) {
  if (val_fraction < 0.0 || val_fraction >= 1.0) {
    throw ConfigError("split_by_trajectory: val_fraction must be in [0, 1)");
  }
  std::vector<std::int32_t> trajs;
  for (const auto& item : dataset.items) {
    if (std::find(trajs.begin(), trajs.end(), item.traj) == trajs.end()) {
      trajs.push_back(item.traj);
    }
  }
  std::sort(trajs.begin(), trajs.end());
  for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
    const std::size_t j = i + rng.uniform_int(static_cast<int>(trajs.size() - i));
    std::swap(trajs[i], trajs[j]);
  }
  const std::size_t nval = static_cast<std::size_t>(
      std::ceil(val_fraction * static_cast<double>(trajs.size())));
  std::vector<std::uint8_t> is_val(dataset.store->size(), 0);
  for (std::size_t i = 0; i < nval && i < trajs.size(); ++i) is_val[trajs[i]] = 1;

  PairDataset train = dataset;
  PairDataset val = dataset;
  train.items.clear();
  val.items.clear();
  train.split_tag = "train";
  val.split_tag = "val";
  for (const auto& item : dataset.items) {
    (is_val[item.traj] ? val : train).items.push_back(item);
  }
  return {std::move(train), std::move(val)};
}

PairDataset shuffle_labels(const PairDataset& dataset, Rng& rng) {
  PairDataset out = dataset;
  out.split_tag = dataset.split_tag + "-shuffled";
  for (std::size_t i = 0; i + 1 < out.items.size(); ++i) {
    const std::size_t j = i + rng.uniform_int(static_cast<int>(out.items.size() - i));
    std::swap(out.items[i].label, out.items[j].label);
  }
  return out;
}

}  // namespace ecmaze

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ecmaze/rnet.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

enum class AggregationKind { kMax, kPercentile, kKthLargest };

struct Aggregation {
  AggregationKind kind = AggregationKind::kPercentile;
  int percentile = 90;   // nearest-rank, [0, 100]
  int kth_largest = 10;  // clamped to the smallest element when k > m
};

// Reduces per-memory reachability values to one similarity score.
// Percentile(p) is nearest-rank: sorted ascending, 1-based index
// ceil(p/100 * m) clamped to [1, m]. Empty input is a usage error.
double aggregate(std::span<const double> values, const Aggregation& agg);

struct BonusConfig {
  double alpha = 0.030;
  double beta = 0.5;
  double novelty_threshold = 0.0;
  Aggregation aggregation;
  int capacity = 200;
};

// b = alpha * (beta - score), so b ranges over [alpha*(beta-1), alpha*beta].
double compute_bonus(double score, const BonusConfig& config);

// Bounded per-episode embedding buffer with random replacement once full.
class EpisodicMemory {
 public:
  EpisodicMemory() = default;
  EpisodicMemory(int capacity, int dim);

  int size() const { return size_; }
  int capacity() const { return capacity_; }
  int dim() const { return dim_; }
  const double* entry(int i) const { return data_.data() + static_cast<std::size_t>(i) * dim_; }
  Tensor entry_tensor(int i) const;
  void clear() { size_ = 0; }

  // Appends below capacity, otherwise overwrites a uniformly random slot.
  // Returns the slot written.
  int insert(const double* embedding, Rng& rng);

 private:
  int capacity_ = 0;
  int dim_ = 0;
  int size_ = 0;
  std::vector<double> data_;
};

// Gate: insert the embedding iff bonus > novelty_threshold (strict).
// slot_out receives the written slot when an insertion happened.
bool maybe_insert(EpisodicMemory& memory, const Tensor& embedding, double bonus,
                  const BonusConfig& config, Rng& rng, int* slot_out = nullptr);

// Reference similarity score: compare the query embedding against every
// entry and aggregate. Empty memory scores 0 (maximum novelty).
double similarity_score(const RNetwork& net, const EpisodicMemory& memory,
                        const Tensor& e_query, const Aggregation& agg);

// Per-step bonus pipeline: embed once, score against memory, convert to a
// bonus, gate the insertion. One instance per environment stream.
class CuriosityModule {
 public:
  CuriosityModule(std::shared_ptr<const RNetwork> net, BonusConfig config,
                  std::uint64_t eviction_seed);

  struct StepInfo {
    double score = 0.0;
    double bonus = 0.0;
    bool inserted = false;
    int memory_size = 0;
  };

  StepInfo ec_step(const Tensor& obs);

  // Wipes the memory; the eviction RNG stream continues.
  void episode_reset();

  // Fast-path score of a query embedding against the current memory. The
  // comparator's first layer is cached per entry, the rest runs batched.
  double score_query(const Tensor& e_query) const;

  // Recomputes the cached comparator partials (after online retraining).
  void refresh_comparator_cache();

  const EpisodicMemory& memory() const { return memory_; }
  const BonusConfig& config() const { return config_; }
  const RNetwork& network() const { return *net_; }

 private:
  void cache_slot(int slot);

  std::shared_ptr<const RNetwork> net_;
  BonusConfig config_;
  EpisodicMemory memory_;
  Rng evict_rng_;
  std::vector<double> layer0_cache_;  // [capacity x h0], ConcatMlp only
};

}  // namespace ecmaze

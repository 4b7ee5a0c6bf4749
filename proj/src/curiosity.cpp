#include "ecmaze/curiosity.hpp"

#include <algorithm>
#include <cmath>

#include "ecmaze/kernels.hpp"
#include "ecmaze/losses.hpp"

namespace ecmaze {

double aggregate(std::span<const double> values, const Aggregation& agg) {
  if (values.empty()) throw UsageError("aggregate: empty value sequence");
  const int m = static_cast<int>(values.size());
  switch (agg.kind) {
    case AggregationKind::kMax:
      return *std::max_element(values.begin(), values.end());
    case AggregationKind::kPercentile: {
      if (agg.percentile < 0 || agg.percentile > 100) {
        throw ConfigError("aggregate: percentile must be in [0, 100]");
      }
      // Nearest rank, exact in integer arithmetic.
      int rank = (agg.percentile * m + 99) / 100;
      rank = std::clamp(rank, 1, m);
      std::vector<double> sorted(values.begin(), values.end());
      std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
      return sorted[rank - 1];
    }
    case AggregationKind::kKthLargest: {
      if (agg.kth_largest < 1) {
        throw ConfigError("aggregate: kth_largest must be positive");
      }
      const int k = std::min(agg.kth_largest, m);
      std::vector<double> sorted(values.begin(), values.end());
      std::nth_element(sorted.begin(), sorted.begin() + (m - k), sorted.end());
      return sorted[m - k];
    }
  }
  throw ConfigError("aggregate: unknown aggregation kind");
}

double compute_bonus(double score, const BonusConfig& config) {
  return config.alpha * (config.beta - score);
}

EpisodicMemory::EpisodicMemory(int capacity, int dim)
    : capacity_(capacity), dim_(dim) {
  if (capacity < 1 || dim < 1) {
    throw ConfigError("EpisodicMemory: capacity and dim must be positive");
  }
  data_.assign(static_cast<std::size_t>(capacity) * dim, 0.0);
}

Tensor EpisodicMemory::entry_tensor(int i) const {
  if (i < 0 || i >= size_) throw UsageError("EpisodicMemory: bad index");
  return Tensor::from({dim_}, std::vector<double>(entry(i), entry(i) + dim_));
}

int EpisodicMemory::insert(const double* embedding, Rng& rng) {
  int slot;
  if (size_ < capacity_) {
    slot = size_++;
  } else {
    slot = rng.uniform_int(capacity_);
  }
  std::copy(embedding, embedding + dim_,
            data_.begin() + static_cast<std::size_t>(slot) * dim_);
  return slot;
}

bool maybe_insert(EpisodicMemory& memory, const Tensor& embedding, double bonus,
                  const BonusConfig& config, Rng& rng, int* slot_out) {
  if (static_cast<int>(embedding.size()) != memory.dim()) {
    throw ConfigError("maybe_insert: embedding dimension mismatch");
  }
  if (!(bonus > config.novelty_threshold)) return false;
  const int slot = memory.insert(embedding.data(), rng);
  if (slot_out) *slot_out = slot;
  return true;
}

double similarity_score(const RNetwork& net, const EpisodicMemory& memory,
                        const Tensor& e_query, const Aggregation& agg) {
  if (memory.size() == 0) return 0.0;
  std::vector<double> values(memory.size());
  for (int i = 0; i < memory.size(); ++i) {
    values[i] = compare(net, memory.entry_tensor(i), e_query);
  }
  return aggregate(values, agg);
}

CuriosityModule::CuriosityModule(std::shared_ptr<const RNetwork> net,
                                 BonusConfig config, std::uint64_t eviction_seed)
    : net_(std::move(net)),
      config_(config),
      memory_(config.capacity, net_->embedding_dim),
      evict_rng_(eviction_seed) {
  if (config_.alpha <= 0.0) {
    throw ConfigError("CuriosityModule: alpha must be positive");
  }
  if (net_->comparator == ComparatorKind::kConcatMlp) {
    const int h0 = net_->comparator_mlp.layers.front().out();
    layer0_cache_.assign(static_cast<std::size_t>(config_.capacity) * h0, 0.0);
  }
}

void CuriosityModule::cache_slot(int slot) {
  if (net_->comparator != ComparatorKind::kConcatMlp) return;
  const DenseLayer& l0 = net_->comparator_mlp.layers.front();
  const int n = net_->embedding_dim;
  const int h0 = l0.out();
  double* row = layer0_cache_.data() + static_cast<std::size_t>(slot) * h0;
  const double* e = memory_.entry(slot);
  // Memory-side partial of the first comparator layer: W0[:, :n] * e.
  for (int o = 0; o < h0; ++o) {
    row[o] = kernels::active().dot(l0.w.row(o), e, n);
  }
}

void CuriosityModule::refresh_comparator_cache() {
  for (int i = 0; i < memory_.size(); ++i) cache_slot(i);
}

double CuriosityModule::score_query(const Tensor& e_query) const {
  const int m = memory_.size();
  if (m == 0) return 0.0;
  const int n = net_->embedding_dim;
  if (static_cast<int>(e_query.size()) != n) {
    throw ConfigError("score_query: embedding dimension mismatch");
  }
  std::vector<double> values(m);

  if (net_->comparator == ComparatorKind::kDotSigmoid) {
    for (int i = 0; i < m; ++i) {
      values[i] = sigmoid(kernels::active().dot(memory_.entry(i), e_query.data(), n));
    }
    return aggregate(values, config_.aggregation);
  }

  const MLPParams& comp = net_->comparator_mlp;
  const DenseLayer& l0 = comp.layers.front();
  const int h0 = l0.out();

  // Query-side partial + bias, shared by every memory entry.
  std::vector<double> u(h0);
  for (int o = 0; o < h0; ++o) {
    u[o] = l0.b[o] + kernels::active().dot(l0.w.row(o) + n, e_query.data(), n);
  }

  Tensor x({m, h0});
  for (int i = 0; i < m; ++i) {
    const double* crow = layer0_cache_.data() + static_cast<std::size_t>(i) * h0;
    double* xrow = x.row(i);
    for (int o = 0; o < h0; ++o) xrow[o] = crow[o] + u[o];
  }
  if (comp.layers.size() > 1 && comp.hidden_activation == Activation::kRelu) {
    relu_inplace(x);
  }
  for (std::size_t li = 1; li < comp.layers.size(); ++li) {
    Tensor next;
    dense_forward(comp.layers[li], x, next);
    if (li + 1 < comp.layers.size() &&
        comp.hidden_activation == Activation::kRelu) {
      relu_inplace(next);
    }
    x = std::move(next);
  }
  for (int i = 0; i < m; ++i) values[i] = sigmoid(x.at(i, 0));
  return aggregate(values, config_.aggregation);
}

CuriosityModule::StepInfo CuriosityModule::ec_step(const Tensor& obs) {
  const Tensor e_mem = embed(*net_, obs);
  double score;
  if (net_->shared) {
    score = score_query(e_mem);
  } else {
    score = score_query(embed_query(*net_, obs));
  }
  const double bonus = compute_bonus(score, config_);
  int slot = -1;
  const bool inserted =
      maybe_insert(memory_, e_mem, bonus, config_, evict_rng_, &slot);
  if (inserted) cache_slot(slot);
  return {score, bonus, inserted, memory_.size()};
}

void CuriosityModule::episode_reset() { memory_.clear(); }

}  // namespace ecmaze

#pragma once

#include "ecmaze/mlp.hpp"
#include "ecmaze/pairs.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

enum class ComparatorKind { kConcatMlp, kDotSigmoid };

const char* comparator_name(ComparatorKind kind);
ComparatorKind comparator_from_name(const std::string& name);

// Reachability classifier R(o_i, o_j) = C(E(o_i), E(o_j)). branch_a embeds
// the memory-side observation, branch_b the query side; with shared branches
// branch_b stays empty and branch_a serves both roles. The ConcatMlp
// comparator consumes [e_mem ; e_query] and emits one raw logit; DotSigmoid
// scores sigmoid(e_mem . e_query).
struct RNetwork {
  MLPParams branch_a;
  MLPParams branch_b;
  bool shared = true;
  ComparatorKind comparator = ComparatorKind::kConcatMlp;
  MLPParams comparator_mlp;
  int embedding_dim = 0;
  bool trained = false;

  const MLPParams& memory_branch() const { return branch_a; }
  const MLPParams& query_branch() const { return shared ? branch_a : branch_b; }
};

// Branches: obs_dim -> hidden -> hidden -> embedding_dim (relu, identity
// output). ConcatMlp comparator: 2*embedding_dim -> hidden -> hidden -> 1.
// Un-shared branches take two independent init draws from rng.
RNetwork make_rnetwork(int obs_dim, int embedding_dim, int hidden,
                       ComparatorKind comparator, bool shared, Rng& rng);

// Memory-side embedding E(o). Accepts a single observation or a batch.
Tensor embed(const RNetwork& net, const Tensor& obs);
// Query-side embedding (identical to embed() when branches are shared).
Tensor embed_query(const RNetwork& net, const Tensor& obs);

double compare_logit(const RNetwork& net, const Tensor& e_mem,
                     const Tensor& e_query);
// Reachability probability in (0, 1).
double compare(const RNetwork& net, const Tensor& e_mem, const Tensor& e_query);

// Full pair prediction: compare(E(obs_i), E_query(obs_j)).
double predict_pair(const RNetwork& net, const Tensor& obs_i,
                    const Tensor& obs_j);

// Fraction of pairs with (compare >= 0.5) == label. A tie score of exactly
// 0.5 is classified "reachable".
double validation_accuracy(const RNetwork& net, const PairDataset& dataset);

}  // namespace ecmaze

#pragma once

#include <vector>

#include "ecmaze/adam.hpp"
#include "ecmaze/mlp.hpp"

namespace ecmaze {

// Actor-critic net: two shared relu layers feeding a softmax policy head and
// a scalar value head.
struct PolicyNet {
  DenseLayer l1;
  DenseLayer l2;
  DenseLayer policy_head;
  DenseLayer value_head;

  PolicyNet() = default;
  PolicyNet(int obs_dim, int action_count, int hidden, Rng& rng);

  int obs_dim() const { return l1.in(); }
  int action_count() const { return policy_head.out(); }

  std::vector<Tensor*> params();
  std::vector<const Tensor*> params() const;
};

struct PolicyCache {
  Tensor input;  // [B x obs]
  Tensor pre1, h1, pre2, h2;
};

// obs: [B x obs_dim] -> logits [B x A], values [B x 1].
void policy_forward(const PolicyNet& net, const Tensor& obs, Tensor& logits,
                    Tensor& values, PolicyCache* cache = nullptr);

struct PolicyGrads {
  DenseLayer l1, l2, policy_head, value_head;
  void zero();
  std::vector<const Tensor*> tensors() const;
};
PolicyGrads make_policy_grads(const PolicyNet& net);

void policy_backward(const PolicyNet& net, const PolicyCache& cache,
                     const Tensor& dlogits, const Tensor& dvalues,
                     PolicyGrads& grads);

struct ActResult {
  int action = 0;
  double logprob = 0.0;
  double value = 0.0;
};

// Samples from the softmax head. Deterministic given (params, obs, rng state).
ActResult policy_act(const PolicyNet& net, const Tensor& obs, Rng& rng);

// Entropy of the policy at one observation (for diagnostics/tests).
double policy_entropy(const PolicyNet& net, const Tensor& obs);

}  // namespace ecmaze

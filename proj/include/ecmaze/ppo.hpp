#pragma once

#include "ecmaze/policy.hpp"
#include "ecmaze/rollout.hpp"

namespace ecmaze {

struct PPOConfig {
  double discount_gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  double entropy_coef = 0.003;
  double learning_rate = 2.5e-4;
  int epochs = 4;
  int minibatch_size = 64;
  double task_reward_scale = 1.0;
  int horizon = 256;
};

struct PpoMinibatch {
  Tensor obs;  // [B x obs_dim]
  std::vector<int> actions;
  std::vector<double> old_logprobs;
  std::vector<double> advantages;  // already normalized
  std::vector<double> returns;
};

struct PpoLossResult {
  double total = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
};

// Clipped-surrogate objective on one minibatch:
//   total = policy + 0.5 * value_mse - entropy_coef * entropy.
// When `grads` is non-null it receives the analytic gradient (overwritten).
PpoLossResult ppo_loss(const PolicyNet& net, const PPOConfig& config,
                       const PpoMinibatch& batch, PolicyGrads* grads);

struct PpoUpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double mean_reward = 0.0;
};

class PpoLearner {
 public:
  PpoLearner(int obs_dim, int action_count, const PPOConfig& config,
             Rng init_rng);

  // GAE + advantage normalization + config.epochs passes of shuffled
  // minibatch Adam steps. Aborts with TrainingError on non-finite losses.
  PpoUpdateStats update(const RolloutBuffer& rollout, Rng& rng);

  PolicyNet& net() { return net_; }
  const PolicyNet& net() const { return net_; }
  const PPOConfig& config() const { return config_; }

 private:
  PPOConfig config_;
  PolicyNet net_;
  AdamState opt_;
};

}  // namespace ecmaze

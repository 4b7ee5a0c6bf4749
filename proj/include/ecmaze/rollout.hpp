#pragma once

#include <cstdint>
#include <vector>

#include "ecmaze/tensor.hpp"

namespace ecmaze {

// r_hat = task_reward_scale * task_r + bonus (the bonus already carries its
// own scale alpha).
inline double combine_rewards(double task_r, double bonus,
                              double task_reward_scale) {
  return task_reward_scale * task_r + bonus;
}

// Fixed-horizon on-policy storage. Episode boundaries are carried in
// `dones` and respected by the advantage recursion.
struct RolloutBuffer {
  std::vector<Tensor> obs;
  std::vector<int> actions;
  std::vector<double> logprobs;
  std::vector<double> values;
  std::vector<double> task_rewards;
  std::vector<double> bonuses;
  std::vector<double> rewards;  // augmented
  std::vector<std::uint8_t> dones;
  double bootstrap_value = 0.0;  // V of the observation after the last step

  void add(Tensor observation, int action, double logprob, double value,
           double task_reward, double bonus, double task_reward_scale,
           bool done) {
    obs.push_back(std::move(observation));
    actions.push_back(action);
    logprobs.push_back(logprob);
    values.push_back(value);
    task_rewards.push_back(task_reward);
    bonuses.push_back(bonus);
    rewards.push_back(combine_rewards(task_reward, bonus, task_reward_scale));
    dones.push_back(done ? 1 : 0);
  }

  int size() const { return static_cast<int>(actions.size()); }

  void clear() {
    obs.clear();
    actions.clear();
    logprobs.clear();
    values.clear();
    task_rewards.clear();
    bonuses.clear();
    rewards.clear();
    dones.clear();
    bootstrap_value = 0.0;
  }
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// delta_t = r_t + gamma * V(s_{t+1}) * (1 - done_t) - V(s_t)
// A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
GaeResult compute_gae(const RolloutBuffer& rollout, double discount_gamma,
                      double gae_lambda);

// In-place mean-0/std-1 normalization with a 1e-8 floor on the std.
void normalize_advantages(std::vector<double>& advantages);

}  // namespace ecmaze

#include "ecmaze/rollout.hpp"

#include <cmath>

namespace ecmaze {

GaeResult compute_gae(const RolloutBuffer& rollout, double discount_gamma,
                      double gae_lambda) {
  const int n = rollout.size();
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    const double not_done = rollout.dones[t] ? 0.0 : 1.0;
    const double next_value =
        (t == n - 1) ? rollout.bootstrap_value : rollout.values[t + 1];
    const double delta = rollout.rewards[t] +
                         discount_gamma * next_value * not_done -
                         rollout.values[t];
    next_adv = delta + discount_gamma * gae_lambda * not_done * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + rollout.values[t];
  }
  return out;
}

void normalize_advantages(std::vector<double>& advantages) {
  if (advantages.empty()) return;
  const double n = static_cast<double>(advantages.size());
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  var /= n;
  const double std = std::max(std::sqrt(var), 1e-8);
  for (double& a : advantages) a = (a - mean) / std;
}

}  // namespace ecmaze

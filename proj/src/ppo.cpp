#include "ecmaze/ppo.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace ecmaze {

PpoLossResult ppo_loss(const PolicyNet& net, const PPOConfig& config,
                       const PpoMinibatch& batch, PolicyGrads* grads) {
  const int count = batch.obs.rows();
  const int nact = net.action_count();
  if (count < 1) throw UsageError("ppo_loss: empty minibatch");

  PolicyCache cache;
  Tensor logits, values;
  policy_forward(net, batch.obs, logits, values, &cache);
  Tensor probs = softmax_rows(logits);

  PpoLossResult res;
  Tensor dlogits({count, nact});
  Tensor dvalues({count, 1});
  int clipped = 0;

  for (int r = 0; r < count; ++r) {
    const int a = batch.actions[r];
    const double adv = batch.advantages[r];
    const double pa = probs.at(r, a);
    const double logp = std::log(std::max(pa, 1e-300));
    const double ratio = std::exp(logp - batch.old_logprobs[r]);
    const double clipped_ratio =
        std::clamp(ratio, 1.0 - config.clip_epsilon, 1.0 + config.clip_epsilon);
    const double s1 = ratio * adv;
    const double s2 = clipped_ratio * adv;
    res.policy_loss += -std::min(s1, s2);
    if (std::abs(ratio - 1.0) > config.clip_epsilon) ++clipped;

    // d(-min)/dlogp: the unclipped branch contributes -ratio*adv, the
    // clipped branch is locally constant.
    double dlogp = 0.0;
    if (s1 <= s2) dlogp = -ratio * adv / count;

    const double verr = values.at(r, 0) - batch.returns[r];
    res.value_loss += verr * verr;
    dvalues.at(r, 0) = 0.5 * 2.0 * verr / count;

    double h = 0.0;
    for (int c = 0; c < nact; ++c) {
      const double p = probs.at(r, c);
      if (p > 0.0) h -= p * std::log(p);
    }
    res.entropy += h;

    for (int c = 0; c < nact; ++c) {
      const double p = probs.at(r, c);
      const double onehot = c == a ? 1.0 : 0.0;
      double g = dlogp * (onehot - p);
      if (p > 0.0) {
        // -entropy_coef * dH/dlogit = entropy_coef * p * (log p + H)
        g += config.entropy_coef * p * (std::log(p) + h) / count;
      }
      dlogits.at(r, c) = g;
    }
  }

  res.policy_loss /= count;
  res.value_loss /= count;
  res.entropy /= count;
  res.clip_fraction = static_cast<double>(clipped) / count;
  res.total = res.policy_loss + 0.5 * res.value_loss -
              config.entropy_coef * res.entropy;
  if (!std::isfinite(res.total)) {
    throw TrainingError("ppo: non-finite loss");
  }

  if (grads) {
    grads->zero();
    policy_backward(net, cache, dlogits, dvalues, *grads);
  }
  return res;
}

PpoLearner::PpoLearner(int obs_dim, int action_count, const PPOConfig& config,
                       Rng init_rng)
    : config_(config), net_(obs_dim, action_count, 64, init_rng) {
  if (config.clip_epsilon <= 0.0) {
    throw ConfigError("PpoLearner: clip_epsilon must be positive");
  }
  if (config.discount_gamma <= 0.0 || config.discount_gamma >= 1.0) {
    throw ConfigError("PpoLearner: discount_gamma must be in (0, 1)");
  }
  opt_ = AdamState(std::as_const(net_).params());
}

PpoUpdateStats PpoLearner::update(const RolloutBuffer& rollout, Rng& rng) {
  const int n = rollout.size();
  if (n < 2) throw UsageError("PpoLearner::update: rollout too small");
  GaeResult gae = compute_gae(rollout, config_.discount_gamma, config_.gae_lambda);
  normalize_advantages(gae.advantages);

  const int obs_dim = net_.obs_dim();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  PpoUpdateStats stats;
  int batches = 0;
  PolicyGrads grads = make_policy_grads(net_);
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    for (int i = 0; i + 1 < n; ++i) {
      const int j = i + rng.uniform_int(n - i);
      std::swap(order[i], order[j]);
    }
    for (int start = 0; start < n; start += config_.minibatch_size) {
      const int count = std::min(config_.minibatch_size, n - start);
      PpoMinibatch mb;
      mb.obs = Tensor({count, obs_dim});
      mb.actions.resize(count);
      mb.old_logprobs.resize(count);
      mb.advantages.resize(count);
      mb.returns.resize(count);
      for (int r = 0; r < count; ++r) {
        const int idx = order[start + r];
        const Tensor& o = rollout.obs[idx];
        for (int c = 0; c < obs_dim; ++c) mb.obs.at(r, c) = o[c];
        mb.actions[r] = rollout.actions[idx];
        mb.old_logprobs[r] = rollout.logprobs[idx];
        mb.advantages[r] = gae.advantages[idx];
        mb.returns[r] = gae.returns[idx];
      }
      PpoLossResult res = ppo_loss(net_, config_, mb, &grads);
      opt_.step(net_.params(), grads.tensors(), config_.learning_rate);
      stats.policy_loss += res.policy_loss;
      stats.value_loss += res.value_loss;
      stats.entropy += res.entropy;
      stats.clip_fraction += res.clip_fraction;
      ++batches;
    }
  }
  stats.policy_loss /= batches;
  stats.value_loss /= batches;
  stats.entropy /= batches;
  stats.clip_fraction /= batches;
  double total_r = 0.0;
  for (double r : rollout.rewards) total_r += r;
  stats.mean_reward = total_r / n;
  return stats;
}

}  // namespace ecmaze

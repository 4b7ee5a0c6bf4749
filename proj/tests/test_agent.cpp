#include <doctest.h>

#include <cmath>
#include <functional>

#include "ecmaze/gradcheck.hpp"
#include "ecmaze/ppo.hpp"

using namespace ecmaze;

namespace {

PpoMinibatch random_minibatch(const PolicyNet& net, int count, Rng& rng) {
  const int obs_dim = net.obs_dim();
  PpoMinibatch mb;
  mb.obs = Tensor({count, obs_dim});
  for (int r = 0; r < count; ++r) {
    for (int c = 0; c < obs_dim; ++c) mb.obs.at(r, c) = rng.uniform(-1.0, 1.0);
  }
  for (int r = 0; r < count; ++r) {
    Tensor row({obs_dim});
    for (int c = 0; c < obs_dim; ++c) row[c] = mb.obs.at(r, c);
    Rng tmp(rng.next_u64());
    const ActResult act = policy_act(net, row, tmp);
    mb.actions.push_back(act.action);
    mb.old_logprobs.push_back(act.logprob);
    mb.advantages.push_back(rng.uniform(-1.5, 1.5));
    mb.returns.push_back(rng.uniform(-1.0, 1.0));
  }
  return mb;
}

}  // namespace

TEST_CASE("zero-weight policy samples uniformly") {
  Rng init(1);
  PolicyNet net(6, 4, 8, init);
  net.policy_head.w.fill(0.0);
  net.policy_head.b.fill(0.0);
  Tensor obs({6});
  Rng rng(2);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 10000; ++i) ++counts[policy_act(net, obs, rng).action];
  for (int a = 0; a < 4; ++a) {
    CHECK(counts[a] > 2300);
    CHECK(counts[a] < 2700);
  }
}

TEST_CASE("a saturated logit dominates sampling") {
  Rng init(3);
  PolicyNet net(4, 3, 8, init);
  net.policy_head.w.fill(0.0);
  net.policy_head.b.fill(0.0);
  net.policy_head.b[1] = 50.0;
  Tensor obs({4});
  Rng rng(4);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += policy_act(net, obs, rng).action == 1;
  CHECK(hits >= 9999);
}

TEST_CASE("action sampling is deterministic per rng state") {
  Rng init(5);
  PolicyNet net(4, 5, 8, init);
  Tensor obs = Tensor::from({4}, {0.1, -0.2, 0.3, 0.7});
  Rng a(77), b(77);
  for (int i = 0; i < 20; ++i) {
    const auto ra = policy_act(net, obs, a);
    const auto rb = policy_act(net, obs, b);
    CHECK(ra.action == rb.action);
    CHECK(ra.logprob == rb.logprob);
    CHECK(ra.value == rb.value);
  }
}

TEST_CASE("combine_rewards arithmetic") {
  CHECK(combine_rewards(10.0, 0.0, 1.0) == 10.0);
  CHECK(combine_rewards(0.0, 0.015, 1.0) == 0.015);
  CHECK(combine_rewards(1.0, -0.01, 5.0) == doctest::Approx(4.99).epsilon(1e-15));
}

TEST_CASE("gae closed forms") {
  RolloutBuffer r;
  for (int t = 0; t < 5; ++t) {
    r.add(Tensor({1}), 0, 0.0, 0.0, static_cast<double>(t + 1), 0.0, 1.0, false);
  }
  r.bootstrap_value = 0.0;

  // lambda = 0, V = 0: A_t = r_t.
  GaeResult g0 = compute_gae(r, 0.9, 0.0);
  for (int t = 0; t < 5; ++t) {
    CHECK(g0.advantages[t] == doctest::Approx(t + 1.0));
  }

  // lambda = 1, gamma = 1, V = 0, no dones: A_t = suffix sum.
  GaeResult g1 = compute_gae(r, 1.0, 1.0);
  double suffix = 0.0;
  for (int t = 4; t >= 0; --t) {
    suffix += t + 1.0;
    CHECK(g1.advantages[t] == doctest::Approx(suffix));
  }
}

TEST_CASE("gae matches a direct recursive oracle on random rollouts") {
  Rng rng(11);
  RolloutBuffer r;
  const int n = 20;
  for (int t = 0; t < n; ++t) {
    r.add(Tensor({1}), 0, 0.0, rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
          rng.uniform(-0.1, 0.1), 1.0, rng.chance(0.15));
  }
  r.bootstrap_value = rng.uniform(-1.0, 1.0);
  const double gamma = 0.97, lambda = 0.9;
  GaeResult fast = compute_gae(r, gamma, lambda);

  // Oracle: naive recursion computed independently per index.
  std::function<double(int)> adv = [&](int t) -> double {
    const double not_done = r.dones[t] ? 0.0 : 1.0;
    const double next_v = t == n - 1 ? r.bootstrap_value : r.values[t + 1];
    const double delta = r.rewards[t] + gamma * next_v * not_done - r.values[t];
    if (t == n - 1) return delta;
    return delta + gamma * lambda * not_done * adv(t + 1);
  };
  for (int t = 0; t < n; ++t) {
    CHECK(fast.advantages[t] == doctest::Approx(adv(t)).epsilon(1e-12));
    CHECK(fast.returns[t] == doctest::Approx(adv(t) + r.values[t]).epsilon(1e-12));
  }
}

TEST_CASE("advantage normalization is exact") {
  Rng rng(13);
  std::vector<double> adv(257);
  for (auto& a : adv) a = rng.uniform(-3.0, 7.0);
  normalize_advantages(adv);
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= adv.size();
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= adv.size();
  CHECK(std::abs(mean) <= 1e-10);
  CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-6);

  std::vector<double> zeros(10, 0.0);
  normalize_advantages(zeros);
  for (double a : zeros) CHECK(a == 0.0);
}

TEST_CASE("identical old and new policy gives unit ratios, zero clip fraction") {
  Rng init(17);
  PolicyNet net(5, 4, 16, init);
  PPOConfig cfg;
  Rng rng(18);
  PpoMinibatch mb = random_minibatch(net, 32, rng);
  const PpoLossResult res = ppo_loss(net, cfg, mb, nullptr);
  CHECK(res.clip_fraction == 0.0);
  // With ratio == 1 the surrogate reduces to -mean(advantage).
  double mean_adv = 0.0;
  for (double a : mb.advantages) mean_adv += a;
  mean_adv /= mb.advantages.size();
  CHECK(res.policy_loss == doctest::Approx(-mean_adv).epsilon(1e-12));
  CHECK(res.entropy >= 0.0);
  CHECK(res.entropy <= std::log(4.0) + 1e-12);
}

TEST_CASE("zero advantages with matched values and no entropy: zero gradients") {
  Rng init(19);
  PolicyNet net(4, 3, 8, init);
  PPOConfig cfg;
  cfg.entropy_coef = 0.0;
  Rng rng(20);
  PpoMinibatch mb = random_minibatch(net, 16, rng);
  for (auto& a : mb.advantages) a = 0.0;
  // Make the value targets equal to the current predictions.
  Tensor logits, values;
  policy_forward(net, mb.obs, logits, values);
  for (int r = 0; r < 16; ++r) mb.returns[r] = values.at(r, 0);
  PolicyGrads grads = make_policy_grads(net);
  ppo_loss(net, cfg, mb, &grads);
  for (const Tensor* t : grads.tensors()) {
    for (std::size_t i = 0; i < t->size(); ++i) {
      CHECK(std::abs((*t)[i]) <= 1e-14);
    }
  }
}

TEST_CASE("ppo combined loss passes the finite-difference check") {
  Rng init(23);
  PolicyNet net(4, 3, 8, init);
  PPOConfig cfg;
  cfg.entropy_coef = 0.01;
  Rng rng(24);
  PpoMinibatch mb = random_minibatch(net, 8, rng);
  PolicyGrads grads = make_policy_grads(net);

  auto loss = [&]() { return ppo_loss(net, cfg, mb, nullptr).total; };
  auto analytic = [&]() {
    ppo_loss(net, cfg, mb, &grads);
    std::vector<Tensor> out;
    for (const Tensor* t : grads.tensors()) out.push_back(*t);
    return out;
  };
  const double err = finite_diff_check(net.params(), loss, analytic, 1e-6);
  CHECK(err <= 1e-4);
}

TEST_CASE("two-armed bandit converges to the rewarded arm") {
  // Constant observation, reward 1 for arm 0. Episodes of length 8.
  Rng init(29);
  PPOConfig cfg;
  cfg.horizon = 64;
  cfg.minibatch_size = 64;
  cfg.epochs = 4;
  cfg.entropy_coef = 0.003;
  cfg.learning_rate = 3e-3;
  PpoLearner learner(3, 2, cfg, init);
  Tensor obs = Tensor::from({3}, {1.0, 0.5, 0.25});
  Rng rng(30);
  double final_p0 = 0.0;
  for (int update = 0; update < 200; ++update) {
    RolloutBuffer rollout;
    int t_in_ep = 0;
    for (int t = 0; t < cfg.horizon; ++t) {
      const ActResult act = policy_act(learner.net(), obs, rng);
      const double reward = act.action == 0 ? 1.0 : 0.0;
      const bool done = ++t_in_ep == 8;
      if (done) t_in_ep = 0;
      rollout.add(obs, act.action, act.logprob, act.value, reward, 0.0, 1.0, done);
    }
    rollout.bootstrap_value = 0.0;
    const auto stats = learner.update(rollout, rng);
    CHECK(stats.entropy >= 0.0);
    CHECK(stats.entropy <= std::log(2.0) + 1e-12);
  }
  Tensor logits, values;
  Tensor row = Tensor::from({1, 3}, {1.0, 0.5, 0.25});
  policy_forward(learner.net(), row, logits, values);
  Tensor probs = softmax_rows(logits);
  final_p0 = probs.at(0, 0);
  CHECK(final_p0 > 0.95);
}

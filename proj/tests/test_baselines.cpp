#include <doctest.h>

#include <set>

#include "ecmaze/curiosity.hpp"
#include "ecmaze/env.hpp"
#include "ecmaze/grid_oracle.hpp"
#include "ecmaze/icm.hpp"

using namespace ecmaze;

TEST_CASE("grid oracle pays once per cell") {
  GridOracle oracle(1, 0.05);
  CHECK(oracle.bonus({3, 4}) == 0.05);  // first step: always a new cell
  CHECK(oracle.bonus({3, 4}) == 0.0);
  CHECK(oracle.bonus({4, 4}) == 0.05);
  CHECK(oracle.bonus({3, 4}) == 0.0);
  oracle.episode_reset();
  CHECK(oracle.visited_count() == 0);
  oracle.episode_reset();  // idempotent
  CHECK(oracle.bonus({3, 4}) == 0.05);
}

TEST_CASE("grid oracle episode sum equals weight times distinct cells") {
  EnvConfig cfg;
  cfg.task.task = Task::kNoReward;
  Env env(cfg);
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GridOracle oracle(1, 0.05);
    env.reset(seed);
    std::set<std::pair<int, int>> cells;
    double sum = oracle.bonus(env.oracle_position());
    cells.insert({env.oracle_position().x, env.oracle_position().y});
    for (int t = 0; t < 499; ++t) {
      env.step(rng.uniform_int(env.action_count()));
      sum += oracle.bonus(env.oracle_position());
      cells.insert({env.oracle_position().x, env.oracle_position().y});
    }
    CHECK(sum == doctest::Approx(0.05 * static_cast<double>(cells.size())).epsilon(1e-12));
    CHECK(oracle.visited_count() == static_cast<int>(cells.size()));
  }
}

TEST_CASE("icm bonus is nonnegative and zero for a perfect (degenerate) model") {
  Rng rng(3);
  IcmConfig cfg;
  cfg.embedding_dim = 4;
  cfg.hidden = 8;
  Icm icm(6, 3, cfg, rng);
  Tensor o1({6}), o2({6});
  for (int i = 0; i < 6; ++i) {
    o1[i] = 0.3 * i;
    o2[i] = 1.0 - 0.1 * i;
  }
  for (int a = 0; a < 3; ++a) CHECK(icm.bonus(o1, a, o2) >= 0.0);
  CHECK_THROWS_AS(icm.bonus(o1, 5, o2), UsageError);

  // Zero embedding and zero forward head: prediction error is exactly zero.
  Icm zero(6, 3, cfg, rng);
  for (auto& l : zero.embedding_net().layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
  for (auto& l : zero.forward_head().layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
  CHECK(zero.bonus(o1, 1, o2) == 0.0);
}

TEST_CASE("icm single-action inverse loss is zero") {
  Rng rng(8);
  IcmConfig cfg;
  cfg.embedding_dim = 4;
  cfg.hidden = 8;
  Icm icm(4, 1, cfg, rng);
  Tensor o1 = Tensor::from({4}, {1.0, 0.0, 0.0, 0.0});
  Tensor o2 = Tensor::from({4}, {0.0, 1.0, 0.0, 0.0});
  std::vector<IcmTransition> batch = {{&o1, 0, &o2}};
  const auto losses = icm.train_minibatch(batch);
  CHECK(losses.inverse == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("icm losses shrink on a repeated batch") {
  Rng rng(19);
  IcmConfig cfg;
  cfg.embedding_dim = 4;
  cfg.hidden = 16;
  cfg.learning_rate = 1e-3;
  Icm icm(5, 3, cfg, rng);
  std::vector<Tensor> obs;
  for (int i = 0; i < 8; ++i) {
    Tensor t({5});
    for (int d = 0; d < 5; ++d) t[d] = rng.uniform();
    obs.push_back(std::move(t));
  }
  std::vector<IcmTransition> batch;
  for (int i = 0; i < 4; ++i) {
    batch.push_back({&obs[i], i % 3, &obs[i + 4]});
  }
  std::vector<double> totals;
  for (int step = 0; step < 10; ++step) {
    const auto l = icm.train_minibatch(batch);
    totals.push_back(cfg.forward_inverse_ratio * l.forward +
                     (1 - cfg.forward_inverse_ratio) * l.inverse);
  }
  CHECK(totals.back() < totals.front());
  int increases = 0;
  for (std::size_t i = 1; i < totals.size(); ++i) {
    increases += totals[i] > totals[i - 1] + 1e-9;
  }
  CHECK(increases <= 2);
}

TEST_CASE("icm forward model converges on a deterministic 2-state chain") {
  // Two one-hot states; action 0 toggles the state, action 1 stays.
  Rng rng(23);
  IcmConfig cfg;
  cfg.embedding_dim = 4;
  cfg.hidden = 16;
  cfg.learning_rate = 3e-3;
  Icm icm(2, 2, cfg, rng);
  Tensor s0 = Tensor::from({2}, {1.0, 0.0});
  Tensor s1 = Tensor::from({2}, {0.0, 1.0});
  std::vector<IcmTransition> batch = {
      {&s0, 0, &s1}, {&s1, 0, &s0}, {&s0, 1, &s0}, {&s1, 1, &s1}};
  double forward = 1.0;
  for (int step = 0; step < 2000; ++step) {
    forward = icm.train_minibatch(batch).forward;
  }
  CHECK(forward < 1e-3);
}

TEST_CASE("curiosity and icm never touch privileged positions") {
  EnvConfig cfg;
  cfg.task.task = Task::kNoReward;
  cfg.position_access = false;
  Env env(cfg);
  env.reset(4);
  Rng rng(6);

  auto net = std::make_shared<const RNetwork>(make_rnetwork(
      env.obs_size(), 8, 16, ComparatorKind::kConcatMlp, true, rng));
  CuriosityModule ec(net, BonusConfig{}, 9);
  IcmConfig icfg;
  icfg.embedding_dim = 8;
  icfg.hidden = 16;
  Icm icm(env.obs_size(), env.action_count(), icfg, rng);

  Tensor prev = env.obs();
  for (int t = 0; t < 50; ++t) {
    const int action = rng.uniform_int(env.action_count());
    env.step(action);
    CHECK_NOTHROW(ec.ec_step(env.obs()));
    CHECK_NOTHROW(icm.bonus(prev, action, env.obs()));
    prev = env.obs();
  }
  // The Grid Oracle, by contrast, requires the privileged readout.
  CHECK_THROWS_AS(env.oracle_position(), UsageError);
}

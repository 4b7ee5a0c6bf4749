#include <doctest.h>

#include <cmath>
#include <memory>
#include <set>

#include "ecmaze/losses.hpp"
#include "ecmaze/pairs.hpp"
#include "ecmaze/rnet.hpp"
#include "ecmaze/rnet_train.hpp"

using namespace ecmaze;

namespace {

// Toy trajectories where temporal distance is linearly readable from the
// observations: obs_t encodes a smooth ramp, so close-in-time pairs are
// close in feature space.
std::shared_ptr<TrajectoryStore> ramp_trajectories(int count, int length) {
  auto store = std::make_shared<TrajectoryStore>();
  for (int t = 0; t < count; ++t) {
    std::vector<Tensor> traj;
    for (int i = 0; i < length; ++i) {
      const double u = static_cast<double>(i) / length;
      traj.push_back(Tensor::from({4}, {u, 1.0 - u, 0.5 * u, 0.25}));
    }
    store->push_back(std::move(traj));
  }
  return store;
}

}  // namespace

TEST_CASE("pair labeling matches the spec examples") {
  CHECK(classify_pair_gap(13 - 10, 5, 2.0) == PairClass::kPositive);
  CHECK(classify_pair_gap(21 - 10, 5, 2.0) == PairClass::kNegative);
  CHECK(classify_pair_gap(17 - 10, 5, 2.0) == PairClass::kExcluded);
}

TEST_CASE("pair labeling is a total partition") {
  for (int k : {1, 2, 5, 10}) {
    for (double gap : {1.5, 2.0, 3.0}) {
      const long top = static_cast<long>(std::ceil(3.0 * gap * k));
      for (long delta = 1; delta <= top; ++delta) {
        int classes = 0;
        const PairClass c = classify_pair_gap(delta, k, gap);
        classes += c == PairClass::kPositive;
        classes += c == PairClass::kNegative;
        classes += c == PairClass::kExcluded;
        CHECK(classes == 1);
        CHECK(classify_pair_gap(-delta, k, gap) == c);
      }
    }
  }
}

TEST_CASE("mined pairs respect the gap rule, balance and order flips") {
  auto store = ramp_trajectories(10, 120);
  Rng rng(5);
  PairDataset ds = mine_pairs(store, 5, 2.0, 100, rng);
  REQUIRE(ds.size() > 0);
  CHECK(ds.positives() * 2 == ds.size());  // exact balance
  int swapped = 0;
  for (const auto& item : ds.items) {
    const long delta = std::labs(static_cast<long>(item.i) - item.j);
    const PairClass c = classify_pair_gap(delta, 5, 2.0);
    if (item.label == 1) CHECK(c == PairClass::kPositive);
    else CHECK(c == PairClass::kNegative);
    CHECK(c != PairClass::kExcluded);
    if (item.i > item.j) ++swapped;
  }
  // Order randomization puts roughly half the pairs in reverse order.
  CHECK(swapped > static_cast<int>(ds.size()) / 4);
  CHECK(swapped < static_cast<int>(3 * ds.size()) / 4);
}

TEST_CASE("short trajectories are skipped") {
  auto store = ramp_trajectories(2, 8);  // shorter than gap*k + 2 = 12
  Rng rng(1);
  PairDataset ds = mine_pairs(store, 5, 2.0, 50, rng);
  CHECK(ds.size() == 0);
  CHECK(ds.skipped_trajectories == 2);
}

TEST_CASE("trajectory split keeps episodes disjoint") {
  auto store = ramp_trajectories(20, 60);
  Rng rng(9);
  PairDataset ds = mine_pairs(store, 3, 2.0, 40, rng);
  auto [train, val] = split_by_trajectory(ds, 0.25, rng);
  CHECK(train.size() + val.size() == ds.size());
  CHECK(val.size() > 0);
  std::set<int> train_trajs, val_trajs;
  for (const auto& i : train.items) train_trajs.insert(i.traj);
  for (const auto& i : val.items) val_trajs.insert(i.traj);
  for (int t : val_trajs) CHECK(train_trajs.count(t) == 0);
}

TEST_CASE("shared branches are one parameter set, un-shared are two") {
  Rng rng(3);
  RNetwork shared = make_rnetwork(6, 4, 8, ComparatorKind::kDotSigmoid, true, rng);
  CHECK(shared.branch_b.layers.empty());
  CHECK(&shared.query_branch() == &shared.branch_a);

  RNetwork unshared = make_rnetwork(6, 4, 8, ComparatorKind::kDotSigmoid, false, rng);
  REQUIRE(unshared.branch_b.layers.size() == unshared.branch_a.layers.size());
  CHECK(&unshared.query_branch() == &unshared.branch_b);
  bool differs = false;
  for (std::size_t i = 0; i < unshared.branch_a.layers[0].w.size(); ++i) {
    differs |= unshared.branch_a.layers[0].w[i] != unshared.branch_b.layers[0].w[i];
  }
  CHECK(differs);
}

TEST_CASE("dot-sigmoid comparator fixed points and exact symmetry") {
  Rng rng(4);
  RNetwork net = make_rnetwork(4, 3, 8, ComparatorKind::kDotSigmoid, true, rng);
  Tensor e1 = Tensor::from({3}, {1.0, 0.0, 0.0});
  Tensor e2 = Tensor::from({3}, {0.0, 1.0, 0.0});
  CHECK(compare(net, e1, e2) == doctest::Approx(0.5).epsilon(1e-15));
  Tensor e = Tensor::from({3}, {1.0, 1.0, 1.0});  // |e|^2 = 3
  CHECK(compare(net, e, e) == doctest::Approx(sigmoid(3.0)).epsilon(1e-12));
  Tensor a = Tensor::from({3}, {0.3, -0.7, 1.1});
  Tensor b = Tensor::from({3}, {-0.2, 0.9, 0.4});
  CHECK(compare(net, a, b) == compare(net, b, a));  // bitwise
  CHECK_THROWS_AS(compare(net, Tensor({2}), e), ConfigError);
}

TEST_CASE("embedding is deterministic and zero nets embed to zero") {
  Rng rng(12);
  RNetwork net = make_rnetwork(5, 4, 8, ComparatorKind::kConcatMlp, true, rng);
  Tensor obs = Tensor::from({5}, {0.1, 0.9, 0.0, 0.4, 1.0});
  Tensor ea = embed(net, obs);
  Tensor eb = embed(net, obs);
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(ea[i] == eb[i]);

  RNetwork zero = net;
  for (auto& l : zero.branch_a.layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
  Tensor ez = embed(zero, obs);
  for (std::size_t i = 0; i < ez.size(); ++i) CHECK(ez[i] == 0.0);
}

TEST_CASE("compare output always lands inside (0, 1)") {
  Rng rng(77);
  for (ComparatorKind kind : {ComparatorKind::kConcatMlp, ComparatorKind::kDotSigmoid}) {
    RNetwork net = make_rnetwork(6, 4, 8, kind, true, rng);
    for (int trial = 0; trial < 50; ++trial) {
      Tensor e1({4}), e2({4});
      for (int i = 0; i < 4; ++i) {
        e1[i] = rng.uniform(-3.0, 3.0);
        e2[i] = rng.uniform(-3.0, 3.0);
      }
      const double c = compare(net, e1, e2);
      CHECK(c > 0.0);
      CHECK(c < 1.0);
    }
  }
}

TEST_CASE("training separates a separable toy set; shuffled labels do not") {
  auto store = ramp_trajectories(30, 100);
  Rng rng(21);
  PairDataset all = mine_pairs(store, 5, 2.0, 80, rng);
  auto [train, val] = split_by_trajectory(all, 0.2, rng);

  RnetTrainConfig cfg;
  cfg.hidden = 16;
  cfg.embedding_dim = 8;
  cfg.epochs = 30;
  cfg.learning_rate = 3e-3;
  Rng train_rng(22);
  RnetTrainResult res = train_rnetwork(train, val, cfg, train_rng);
  CHECK(res.net.trained);
  REQUIRE_FALSE(res.log.empty());
  CHECK(res.log.back().val_accuracy >= 0.99);

  // Loss is non-increasing on a 5-epoch moving average.
  const auto& log = res.log;
  for (std::size_t i = 5; i + 5 <= log.size(); i += 5) {
    double prev = 0.0, cur = 0.0;
    for (std::size_t j = i - 5; j < i; ++j) prev += log[j].train_loss;
    for (std::size_t j = i; j < i + 5; ++j) cur += log[j].train_loss;
    CHECK(cur <= prev * 1.02);
  }

  Rng shuffle_rng(23);
  PairDataset shuffled_train = shuffle_labels(train, shuffle_rng);
  PairDataset shuffled_val = shuffle_labels(val, shuffle_rng);
  Rng train_rng2(24);
  RnetTrainResult control = train_rnetwork(shuffled_train, shuffled_val, cfg, train_rng2);
  CHECK(control.log.back().val_accuracy > 0.40);
  CHECK(control.log.back().val_accuracy < 0.60);
}

TEST_CASE("validation accuracy ties classify as reachable") {
  Rng rng(31);
  RNetwork net = make_rnetwork(4, 3, 8, ComparatorKind::kDotSigmoid, true, rng);
  // Zero branches -> all embeddings zero -> logit 0 -> predicted label 1.
  for (auto& l : net.branch_a.layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
  auto store = std::make_shared<TrajectoryStore>();
  store->push_back({Tensor({4}), Tensor({4}), Tensor({4}), Tensor({4})});
  PairDataset ds;
  ds.store = store;
  ds.items = {{0, 0, 1, 1}, {0, 0, 2, 0}, {0, 1, 3, 1}, {0, 0, 3, 0}};
  CHECK(validation_accuracy(net, ds) == doctest::Approx(0.5));
  PairDataset empty;
  empty.store = store;
  CHECK_THROWS_AS(validation_accuracy(net, empty), UsageError);
}

TEST_CASE("rnet trainer rejects unbalanced or empty datasets") {
  auto store = ramp_trajectories(4, 60);
  Rng rng(41);
  PairDataset ds = mine_pairs(store, 5, 2.0, 50, rng);
  // Strip most negatives to unbalance.
  PairDataset bad = ds;
  bad.items.clear();
  int negs = 2;
  for (const auto& i : ds.items) {
    if (i.label == 1 || negs-- > 0) bad.items.push_back(i);
  }
  RnetTrainConfig cfg;
  cfg.hidden = 8;
  cfg.embedding_dim = 4;
  Rng t(1);
  PairDataset val;
  val.store = store;
  CHECK_THROWS_AS(train_rnetwork(bad, val, cfg, t), ConfigError);
  PairDataset empty;
  empty.store = store;
  CHECK_THROWS_AS(train_rnetwork(empty, val, cfg, t), ConfigError);
}

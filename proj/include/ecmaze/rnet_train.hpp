#pragma once

#include <vector>

#include "ecmaze/adam.hpp"
#include "ecmaze/rnet.hpp"

namespace ecmaze {

struct RnetTrainConfig {
  int batch_size = 64;
  double learning_rate = 1e-4;
  int epochs = 6;
  int hidden = 64;
  int embedding_dim = 16;
  ComparatorKind comparator = ComparatorKind::kConcatMlp;
  bool shared_branches = true;
  // false freezes the branches at their random init and trains only the
  // comparator (the random-embedding ablation).
  bool train_embedding = true;
};

struct RnetEpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;  // NaN when no validation set was given
};

// Siamese logistic-regression training with persistent optimizer state, so
// the online protocol can keep refining one network across retrain rounds.
class RnetTrainer {
 public:
  RnetTrainer(int obs_dim, const RnetTrainConfig& config, Rng init_rng);

  // Shuffles per epoch; throws TrainingError when the epoch loss exceeds
  // 10x the first epoch's loss (divergence).
  std::vector<RnetEpochLog> train_epochs(const PairDataset& train,
                                         const PairDataset& val, int epochs,
                                         Rng& rng);

  RNetwork& net() { return net_; }
  const RNetwork& net() const { return net_; }

 private:
  double run_epoch(const PairDataset& train, Rng& rng);

  RnetTrainConfig config_;
  RNetwork net_;
  AdamState opt_a_;
  AdamState opt_b_;
  AdamState opt_comp_;
  double initial_loss_ = -1.0;
};

struct RnetTrainResult {
  RNetwork net;
  std::vector<RnetEpochLog> log;
};

// One-shot offline training: fresh network, config.epochs epochs.
RnetTrainResult train_rnetwork(const PairDataset& train, const PairDataset& val,
                               const RnetTrainConfig& config, Rng& rng);

}  // namespace ecmaze

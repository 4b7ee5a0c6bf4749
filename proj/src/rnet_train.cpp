#include "ecmaze/rnet_train.hpp"

#include <cmath>
#include <numeric>

#include "ecmaze/kernels.hpp"
#include "ecmaze/losses.hpp"

namespace ecmaze {

RnetTrainer::RnetTrainer(int obs_dim, const RnetTrainConfig& config,
                         Rng init_rng)
    : config_(config) {
  if (config.comparator == ComparatorKind::kDotSigmoid &&
      !config.train_embedding) {
    throw ConfigError("RnetTrainer: dot comparator with frozen embedding has nothing to train");
  }
  net_ = make_rnetwork(obs_dim, config.embedding_dim, config.hidden,
                       config.comparator, config.shared_branches, init_rng);
  opt_a_ = make_adam(net_.branch_a);
  if (!net_.shared) opt_b_ = make_adam(net_.branch_b);
  if (net_.comparator == ComparatorKind::kConcatMlp) {
    opt_comp_ = make_adam(net_.comparator_mlp);
  }
}

double RnetTrainer::run_epoch(const PairDataset& train, Rng& rng) {
  const int obs_dim = net_.branch_a.input_dim();
  const int n = net_.embedding_dim;
  const std::size_t total = train.size();

  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i + 1 < total; ++i) {
    const std::size_t j = i + rng.uniform_int(static_cast<int>(total - i));
    std::swap(order[i], order[j]);
  }

  MLPGrads grads_a = make_grads(net_.branch_a);
  MLPGrads grads_b;
  if (!net_.shared) grads_b = make_grads(net_.branch_b);
  MLPGrads grads_comp;
  if (net_.comparator == ComparatorKind::kConcatMlp) {
    grads_comp = make_grads(net_.comparator_mlp);
  }

  double loss_sum = 0.0;
  std::size_t seen = 0;
  for (std::size_t start = 0; start < total; start += config_.batch_size) {
    const int count = static_cast<int>(
        std::min<std::size_t>(config_.batch_size, total - start));
    Tensor xa({count, obs_dim});
    Tensor xb({count, obs_dim});
    std::vector<int> labels(count);
    for (int r = 0; r < count; ++r) {
      const std::size_t idx = order[start + r];
      const Tensor& a = train.first(idx);
      const Tensor& b = train.second(idx);
      for (int c = 0; c < obs_dim; ++c) {
        xa.at(r, c) = a[c];
        xb.at(r, c) = b[c];
      }
      labels[r] = train.items[idx].label;
    }

    ForwardCache cache_a, cache_b;
    Tensor ea = mlp_forward(net_.branch_a, xa, &cache_a);
    Tensor eb = mlp_forward(net_.query_branch(), xb, &cache_b);

    Tensor dea({count, n});
    Tensor deb({count, n});
    double batch_loss = 0.0;

    if (net_.comparator == ComparatorKind::kConcatMlp) {
      Tensor xc({count, 2 * n});
      for (int r = 0; r < count; ++r) {
        for (int i = 0; i < n; ++i) {
          xc.at(r, i) = ea.at(r, i);
          xc.at(r, n + i) = eb.at(r, i);
        }
      }
      ForwardCache cache_c;
      Tensor logits = mlp_forward(net_.comparator_mlp, xc, &cache_c);
      Tensor dlogits({count, 1});
      for (int r = 0; r < count; ++r) {
        const auto l = logistic_loss(logits.at(r, 0), labels[r]);
        batch_loss += l.loss;
        dlogits.at(r, 0) = l.dlogit / count;
      }
      grads_comp.zero();
      Tensor dxc;
      mlp_backward(net_.comparator_mlp, cache_c, dlogits, grads_comp, &dxc);
      for (int r = 0; r < count; ++r) {
        for (int i = 0; i < n; ++i) {
          dea.at(r, i) = dxc.at(r, i);
          deb.at(r, i) = dxc.at(r, n + i);
        }
      }
      adam_step(net_.comparator_mlp, grads_comp, opt_comp_,
                config_.learning_rate);
    } else {
      for (int r = 0; r < count; ++r) {
        const double z = kernels::active().dot(ea.row(r), eb.row(r), n);
        const auto l = logistic_loss(z, labels[r]);
        batch_loss += l.loss;
        const double g = l.dlogit / count;
        for (int i = 0; i < n; ++i) {
          dea.at(r, i) = g * eb.at(r, i);
          deb.at(r, i) = g * ea.at(r, i);
        }
      }
    }

    if (config_.train_embedding) {
      grads_a.zero();
      if (net_.shared) {
        mlp_backward(net_.branch_a, cache_a, dea, grads_a);
        mlp_backward(net_.branch_a, cache_b, deb, grads_a);
        adam_step(net_.branch_a, grads_a, opt_a_, config_.learning_rate);
      } else {
        grads_b.zero();
        mlp_backward(net_.branch_a, cache_a, dea, grads_a);
        mlp_backward(net_.branch_b, cache_b, deb, grads_b);
        adam_step(net_.branch_a, grads_a, opt_a_, config_.learning_rate);
        adam_step(net_.branch_b, grads_b, opt_b_, config_.learning_rate);
      }
    }

    loss_sum += batch_loss;
    seen += count;
  }
  return loss_sum / static_cast<double>(seen);
}

std::vector<RnetEpochLog> RnetTrainer::train_epochs(const PairDataset& train,
                                                    const PairDataset& val,
                                                    int epochs, Rng& rng) {
  if (train.items.empty()) {
    throw ConfigError("RnetTrainer: training dataset is empty");
  }
  const double pos = static_cast<double>(train.positives());
  const double frac = pos / static_cast<double>(train.size());
  if (std::abs(frac - 0.5) > 0.05) {
    throw ConfigError("RnetTrainer: dataset is not class-balanced");
  }

  std::vector<RnetEpochLog> log;
  for (int e = 0; e < epochs; ++e) {
    const double loss = run_epoch(train, rng);
    if (initial_loss_ < 0.0) initial_loss_ = loss;
    if (loss > 10.0 * initial_loss_) {
      throw TrainingError("rnet training diverged: epoch loss " +
                          std::to_string(loss) + " vs initial " +
                          std::to_string(initial_loss_));
    }
    RnetEpochLog entry;
    entry.epoch = e;
    entry.train_loss = loss;
    entry.val_accuracy = val.items.empty()
                             ? std::nan("")
                             : validation_accuracy(net_, val);
    log.push_back(entry);
  }
  net_.trained = true;
  return log;
}

RnetTrainResult train_rnetwork(const PairDataset& train, const PairDataset& val,
                               const RnetTrainConfig& config, Rng& rng) {
  if (train.items.empty()) {
    throw ConfigError("train_rnetwork: training dataset is empty");
  }
  const int obs_dim = static_cast<int>(train.first(0).size());
  RnetTrainer trainer(obs_dim, config, rng.derive(0x7261696e));
  RnetTrainResult result;
  result.log = trainer.train_epochs(train, val, config.epochs, rng);
  result.net = std::move(trainer.net());
  return result;
}

}  // namespace ecmaze

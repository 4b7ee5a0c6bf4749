#include "ecmaze/icm.hpp"

#include <cmath>

#include "ecmaze/kernels.hpp"

namespace ecmaze {

Icm::Icm(int obs_dim, int action_count, const IcmConfig& config, Rng init_rng)
    : config_(config), action_count_(action_count) {
  if (config.forward_inverse_ratio <= 0.0 || config.forward_inverse_ratio >= 1.0) {
    throw ConfigError("Icm: forward_inverse_ratio must be in (0, 1)");
  }
  const int n = config.embedding_dim;
  const int h = config.hidden;
  embed_ = make_mlp({obs_dim, h, h, n}, Activation::kRelu,
                    OutputTransform::kIdentity, init_rng);
  inverse_ = make_mlp({2 * n, h, action_count}, Activation::kRelu,
                      OutputTransform::kIdentity, init_rng);
  forward_ = make_mlp({n + action_count, h, n}, Activation::kRelu,
                      OutputTransform::kIdentity, init_rng);
  opt_embed_ = make_adam(embed_);
  opt_inverse_ = make_adam(inverse_);
  opt_forward_ = make_adam(forward_);
}

double Icm::bonus(const Tensor& obs, int action, const Tensor& next_obs) const {
  if (action < 0 || action >= action_count_) {
    throw UsageError("Icm::bonus: action out of range");
  }
  const int n = config_.embedding_dim;
  Tensor phi = mlp_forward(embed_, obs);
  Tensor phi2 = mlp_forward(embed_, next_obs);
  Tensor x({n + action_count_});
  for (int i = 0; i < n; ++i) x[i] = phi[i];
  x[n + action] = 1.0;
  Tensor pred = mlp_forward(forward_, x);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = pred[i] - phi2[i];
    err += d * d;
  }
  return config_.bonus_scale * 0.5 * err;
}

Icm::Losses Icm::train_minibatch(std::span<const IcmTransition> batch) {
  if (batch.empty()) throw UsageError("Icm::train_minibatch: empty batch");
  const int count = static_cast<int>(batch.size());
  const int obs_dim = embed_.input_dim();
  const int n = config_.embedding_dim;
  const double ratio = config_.forward_inverse_ratio;

  Tensor xo({count, obs_dim});
  Tensor xo2({count, obs_dim});
  for (int r = 0; r < count; ++r) {
    if (batch[r].action < 0 || batch[r].action >= action_count_) {
      throw UsageError("Icm::train_minibatch: action out of range");
    }
    for (int c = 0; c < obs_dim; ++c) {
      xo.at(r, c) = (*batch[r].obs)[c];
      xo2.at(r, c) = (*batch[r].next_obs)[c];
    }
  }

  ForwardCache cache_e1, cache_e2;
  Tensor phi = mlp_forward(embed_, xo, &cache_e1);
  Tensor phi2 = mlp_forward(embed_, xo2, &cache_e2);

  // Inverse dynamics: classify the action from [phi(o); phi(o')].
  Tensor xi({count, 2 * n});
  for (int r = 0; r < count; ++r) {
    for (int i = 0; i < n; ++i) {
      xi.at(r, i) = phi.at(r, i);
      xi.at(r, n + i) = phi2.at(r, i);
    }
  }
  ForwardCache cache_i;
  Tensor logits = mlp_forward(inverse_, xi, &cache_i);
  Tensor probs = softmax_rows(logits);
  double inverse_loss = 0.0;
  Tensor dlogits({count, action_count_});
  for (int r = 0; r < count; ++r) {
    const int a = batch[r].action;
    inverse_loss += -std::log(std::max(probs.at(r, a), 1e-300));
    for (int c = 0; c < action_count_; ++c) {
      const double target = c == a ? 1.0 : 0.0;
      // (1 - ratio) weighting of the inverse objective, mean over batch.
      dlogits.at(r, c) = (1.0 - ratio) * (probs.at(r, c) - target) / count;
    }
  }
  inverse_loss /= count;

  MLPGrads grads_inv = make_grads(inverse_);
  grads_inv.zero();
  Tensor dxi;
  mlp_backward(inverse_, cache_i, dlogits, grads_inv, &dxi);

  // Forward model on detached embeddings: predict phi(o') from phi(o), a.
  Tensor xf({count, n + action_count_});
  for (int r = 0; r < count; ++r) {
    for (int i = 0; i < n; ++i) xf.at(r, i) = phi.at(r, i);
    xf.at(r, n + batch[r].action) = 1.0;
  }
  ForwardCache cache_f;
  Tensor pred = mlp_forward(forward_, xf, &cache_f);
  double forward_loss = 0.0;
  Tensor dpred({count, n});
  for (int r = 0; r < count; ++r) {
    for (int i = 0; i < n; ++i) {
      const double d = pred.at(r, i) - phi2.at(r, i);
      forward_loss += 0.5 * d * d;
      dpred.at(r, i) = ratio * d / count;
    }
  }
  forward_loss /= count;

  if (!std::isfinite(inverse_loss) || !std::isfinite(forward_loss)) {
    throw TrainingError("icm: non-finite loss");
  }

  MLPGrads grads_fwd = make_grads(forward_);
  grads_fwd.zero();
  mlp_backward(forward_, cache_f, dpred, grads_fwd);

  // Embedding gradients flow only through the inverse objective.
  Tensor dphi({count, n});
  Tensor dphi2({count, n});
  for (int r = 0; r < count; ++r) {
    for (int i = 0; i < n; ++i) {
      dphi.at(r, i) = dxi.at(r, i);
      dphi2.at(r, i) = dxi.at(r, n + i);
    }
  }
  MLPGrads grads_embed = make_grads(embed_);
  grads_embed.zero();
  mlp_backward(embed_, cache_e1, dphi, grads_embed);
  mlp_backward(embed_, cache_e2, dphi2, grads_embed);

  adam_step(inverse_, grads_inv, opt_inverse_, config_.learning_rate);
  adam_step(forward_, grads_fwd, opt_forward_, config_.learning_rate);
  adam_step(embed_, grads_embed, opt_embed_, config_.learning_rate);

  return {inverse_loss, forward_loss};
}

}  // namespace ecmaze

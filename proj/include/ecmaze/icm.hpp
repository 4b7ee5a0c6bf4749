#pragma once

#include <span>

#include "ecmaze/adam.hpp"
#include "ecmaze/mlp.hpp"

namespace ecmaze {

struct IcmConfig {
  int embedding_dim = 16;
  int hidden = 64;
  // total loss = ratio * forward + (1 - ratio) * inverse
  double forward_inverse_ratio = 0.2;
  double bonus_scale = 0.5;  // eta
  double learning_rate = 2.5e-4;
  int batch_size = 64;
};

struct IcmTransition {
  const Tensor* obs;
  int action;
  const Tensor* next_obs;
};

// Forward-model-surprise curiosity with an inverse-dynamics embedding.
// The inverse loss trains the embedding and inverse head; the forward loss
// trains the forward head only (its inputs and targets are detached), the
// usual guard against embedding collapse.
class Icm {
 public:
  Icm(int obs_dim, int action_count, const IcmConfig& config, Rng init_rng);

  // eta * ||f(phi(o), a) - phi(o')||^2 / 2, always >= 0.
  double bonus(const Tensor& obs, int action, const Tensor& next_obs) const;

  struct Losses {
    double inverse = 0.0;
    double forward = 0.0;
  };
  // One Adam step on the mixed objective. Losses returned unweighted.
  Losses train_minibatch(std::span<const IcmTransition> batch);

  const IcmConfig& config() const { return config_; }
  int action_count() const { return action_count_; }

  MLPParams& embedding_net() { return embed_; }
  MLPParams& inverse_head() { return inverse_; }
  MLPParams& forward_head() { return forward_; }

 private:
  IcmConfig config_;
  int action_count_;
  MLPParams embed_;
  MLPParams inverse_;
  MLPParams forward_;
  AdamState opt_embed_;
  AdamState opt_inverse_;
  AdamState opt_forward_;
};

}  // namespace ecmaze

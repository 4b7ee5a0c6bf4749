#pragma once

#include <vector>

#include "ecmaze/mlp.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam over an ordered list of tensors. The moment buffers
// mirror the parameter shapes; the step counter increments once per step()
// regardless of how many tensors are updated.
class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(const std::vector<const Tensor*>& params,
                     AdamConfig config = {});

  // Throws TrainingError when any gradient entry is non-finite.
  void step(const std::vector<Tensor*>& params,
            const std::vector<const Tensor*>& grads, double learning_rate);

  long step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  long step_ = 0;
};

inline AdamState make_adam(const MLPParams& params, AdamConfig config = {}) {
  return AdamState(param_tensors(params), config);
}

// Convenience for whole-MLP updates.
void adam_step(MLPParams& params, const MLPGrads& grads, AdamState& state,
               double learning_rate);

}  // namespace ecmaze

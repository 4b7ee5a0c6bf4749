#include "ecmaze/adam.hpp"

#include <cmath>

#include "ecmaze/kernels.hpp"

namespace ecmaze {

AdamState::AdamState(const std::vector<const Tensor*>& params,
                     AdamConfig config)
    : config_(config) {
  for (const Tensor* p : params) {
    m_.push_back(Tensor(p->shape()));
    v_.push_back(Tensor(p->shape()));
  }
}

void AdamState::step(const std::vector<Tensor*>& params,
                     const std::vector<const Tensor*>& grads,
                     double learning_rate) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw UsageError("AdamState::step: tensor list does not match state");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(m_[i]) || !grads[i]->same_shape(m_[i])) {
      throw UsageError("AdamState::step: shape mismatch");
    }
    if (!all_finite(*grads[i])) {
      throw TrainingError("adam: non-finite gradient at tensor index " +
                          std::to_string(i) + " (step " +
                          std::to_string(step_ + 1) + ")");
    }
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    kernels::active().adam(params[i]->data(), m_[i].data(), v_[i].data(),
                           grads[i]->data(), params[i]->size(), learning_rate,
                           config_.beta1, config_.beta2, config_.eps, bc1, bc2);
  }
}

void adam_step(MLPParams& params, const MLPGrads& grads, AdamState& state,
               double learning_rate) {
  state.step(param_tensors(params), grad_tensors(grads), learning_rate);
}

}  // namespace ecmaze

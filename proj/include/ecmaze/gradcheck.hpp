#pragma once

#include <functional>
#include <vector>

#include "ecmaze/mlp.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

// Central-difference gradient verification. `loss` re-evaluates the loss at
// the current parameter values (read through the pointers in `params`);
// `analytic` returns gradients in the same order/shapes. Returns
// max_i |analytic_i - central_i| / max(1, |analytic_i|).
double finite_diff_check(const std::vector<Tensor*>& params,
                         const std::function<double()>& loss,
                         const std::function<std::vector<Tensor>()>& analytic,
                         double eps = 1e-5);

// MLP form: the probe maps the net's pre-transform output to a scalar loss
// and its gradient w.r.t. that output.
struct LossOnOutput {
  double loss;
  Tensor dlogits;
};
double finite_diff_check(
    MLPParams& params, const Tensor& input,
    const std::function<LossOnOutput(const Tensor& logits)>& loss_fn,
    double eps = 1e-5);

}  // namespace ecmaze

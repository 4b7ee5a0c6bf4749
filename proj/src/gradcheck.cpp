#include "ecmaze/gradcheck.hpp"

#include <cmath>

namespace ecmaze {

double finite_diff_check(const std::vector<Tensor*>& params,
                         const std::function<double()>& loss,
                         const std::function<std::vector<Tensor>()>& analytic,
                         double eps) {
  if (eps <= 0.0) throw UsageError("finite_diff_check: eps must be positive");
  const std::vector<Tensor> grads = analytic();
  if (grads.size() != params.size()) {
    throw UsageError("finite_diff_check: gradient list size mismatch");
  }
  double worst = 0.0;
  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor& p = *params[t];
    if (!grads[t].same_shape(p)) {
      throw UsageError("finite_diff_check: gradient shape mismatch");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + eps;
      const double up = loss();
      p[i] = saved - eps;
      const double down = loss();
      p[i] = saved;
      const double central = (up - down) / (2.0 * eps);
      const double a = grads[t][i];
      const double err = std::abs(a - central) / std::max(1.0, std::abs(a));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

double finite_diff_check(
    MLPParams& params, const Tensor& input,
    const std::function<LossOnOutput(const Tensor& logits)>& loss_fn,
    double eps) {
  // Pre-transform output == last entry of the cache's pre list.
  auto logits_from = [](const ForwardCache& cache) {
    const Tensor& pre = cache.pre.back();
    if (cache.single) {
      return Tensor::from({pre.cols()},
                          std::vector<double>(pre.data(), pre.data() + pre.size()));
    }
    return pre;
  };
  auto loss = [&]() {
    ForwardCache cache;
    mlp_forward(params, input, &cache);
    return loss_fn(logits_from(cache)).loss;
  };
  auto analytic = [&]() {
    ForwardCache cache;
    mlp_forward(params, input, &cache);
    LossOnOutput probe = loss_fn(logits_from(cache));
    MLPGrads grads = make_grads(params);
    grads.zero();
    mlp_backward(params, cache, probe.dlogits, grads);
    std::vector<Tensor> out;
    for (auto& l : grads.layers) {
      out.push_back(std::move(l.w));
      out.push_back(std::move(l.b));
    }
    return out;
  };
  std::vector<Tensor*> ptrs = param_tensors(params);
  return finite_diff_check(ptrs, loss, analytic, eps);
}

}  // namespace ecmaze

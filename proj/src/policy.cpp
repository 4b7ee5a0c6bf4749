#include "ecmaze/policy.hpp"

#include <cmath>

namespace ecmaze {

PolicyNet::PolicyNet(int obs_dim, int action_count, int hidden, Rng& rng) {
  if (obs_dim < 1 || action_count < 2 || hidden < 1) {
    throw ConfigError("PolicyNet: bad dimensions");
  }
  l1 = make_dense(obs_dim, hidden, rng);
  l2 = make_dense(hidden, hidden, rng);
  policy_head = make_dense(hidden, action_count, rng);
  value_head = make_dense(hidden, 1, rng);
}

std::vector<Tensor*> PolicyNet::params() {
  return {&l1.w, &l1.b, &l2.w, &l2.b, &policy_head.w, &policy_head.b,
          &value_head.w, &value_head.b};
}

std::vector<const Tensor*> PolicyNet::params() const {
  return {&l1.w, &l1.b, &l2.w, &l2.b, &policy_head.w, &policy_head.b,
          &value_head.w, &value_head.b};
}

void PolicyGrads::zero() {
  for (DenseLayer* l : {&l1, &l2, &policy_head, &value_head}) {
    l->w.fill(0.0);
    l->b.fill(0.0);
  }
}

std::vector<const Tensor*> PolicyGrads::tensors() const {
  return {&l1.w, &l1.b, &l2.w, &l2.b, &policy_head.w, &policy_head.b,
          &value_head.w, &value_head.b};
}

PolicyGrads make_policy_grads(const PolicyNet& net) {
  PolicyGrads g;
  g.l1 = {Tensor(net.l1.w.shape()), Tensor(net.l1.b.shape())};
  g.l2 = {Tensor(net.l2.w.shape()), Tensor(net.l2.b.shape())};
  g.policy_head = {Tensor(net.policy_head.w.shape()), Tensor(net.policy_head.b.shape())};
  g.value_head = {Tensor(net.value_head.w.shape()), Tensor(net.value_head.b.shape())};
  return g;
}

void policy_forward(const PolicyNet& net, const Tensor& obs, Tensor& logits,
                    Tensor& values, PolicyCache* cache) {
  PolicyCache local;
  PolicyCache& c = cache ? *cache : local;
  if (obs.rank() != 2) throw ConfigError("policy_forward: obs must be [B x obs_dim]");
  c.input = obs;
  dense_forward(net.l1, c.input, c.pre1);
  c.h1 = c.pre1;
  relu_inplace(c.h1);
  dense_forward(net.l2, c.h1, c.pre2);
  c.h2 = c.pre2;
  relu_inplace(c.h2);
  dense_forward(net.policy_head, c.h2, logits);
  dense_forward(net.value_head, c.h2, values);
}

void policy_backward(const PolicyNet& net, const PolicyCache& cache,
                     const Tensor& dlogits, const Tensor& dvalues,
                     PolicyGrads& grads) {
  Tensor dh2_pi, dh2_v;
  dense_backward(net.policy_head, cache.h2, dlogits, grads.policy_head, &dh2_pi);
  dense_backward(net.value_head, cache.h2, dvalues, grads.value_head, &dh2_v);
  for (std::size_t i = 0; i < dh2_pi.size(); ++i) dh2_pi[i] += dh2_v[i];
  relu_backward_inplace(dh2_pi, cache.pre2);
  Tensor dh1;
  dense_backward(net.l2, cache.h1, dh2_pi, grads.l2, &dh1);
  relu_backward_inplace(dh1, cache.pre1);
  dense_backward(net.l1, cache.input, dh1, grads.l1, nullptr);
}

namespace {

Tensor as_single_row(const Tensor& obs) {
  if (obs.rank() == 2) return obs;
  return Tensor::from({1, static_cast<int>(obs.size())},
                      std::vector<double>(obs.data(), obs.data() + obs.size()));
}

}  // namespace

ActResult policy_act(const PolicyNet& net, const Tensor& obs, Rng& rng) {
  Tensor row = as_single_row(obs);
  Tensor logits, values;
  policy_forward(net, row, logits, values);
  Tensor probs = softmax_rows(logits);
  const int n = probs.cols();
  const double u = rng.uniform();
  double cdf = 0.0;
  int action = n - 1;
  for (int i = 0; i < n; ++i) {
    cdf += probs.at(0, i);
    if (u < cdf) {
      action = i;
      break;
    }
  }
  return {action, std::log(probs.at(0, action)), values.at(0, 0)};
}

double policy_entropy(const PolicyNet& net, const Tensor& obs) {
  Tensor row = as_single_row(obs);
  Tensor logits, values;
  policy_forward(net, row, logits, values);
  Tensor probs = softmax_rows(logits);
  double h = 0.0;
  for (int i = 0; i < probs.cols(); ++i) {
    const double p = probs.at(0, i);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace ecmaze

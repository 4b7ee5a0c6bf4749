#pragma once

#include <vector>

#include "ecmaze/common.hpp"
#include "ecmaze/tensor.hpp"

namespace ecmaze {

enum class Activation { kRelu, kIdentity };
enum class OutputTransform { kIdentity, kSigmoid, kSoftmax };

struct DenseLayer {
  Tensor w;  // [out x in]
  Tensor b;  // [out]
  int in() const { return w.shape()[1]; }
  int out() const { return w.shape()[0]; }
};

// Fully-connected net: hidden layers share one activation, the last layer
// feeds the output transform. Softmax is per sample (per row in batch mode).
struct MLPParams {
  std::vector<DenseLayer> layers;
  Activation hidden_activation = Activation::kRelu;
  OutputTransform output_transform = OutputTransform::kIdentity;

  int input_dim() const { return layers.front().in(); }
  int output_dim() const { return layers.back().out(); }
};

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
DenseLayer make_dense(int in, int out, Rng& rng);
MLPParams make_mlp(const std::vector<int>& dims, Activation hidden,
                   OutputTransform output, Rng& rng);

struct MLPGrads {
  std::vector<DenseLayer> layers;  // same shapes as the params
  void zero();
};
MLPGrads make_grads(const MLPParams& params);

// Everything backward needs: the input, per-layer pre-activations and
// post-activation outputs. `single` records whether the caller passed a
// rank-1 tensor so the output keeps that rank.
struct ForwardCache {
  Tensor input;              // [B x in]
  std::vector<Tensor> pre;   // pre-activation per layer, [B x out_l]
  std::vector<Tensor> act;   // post-activation per layer (last = last pre)
  Tensor output;             // after the output transform
  int batch = 0;
  bool single = false;
};

// input: [in] or [B x in]. Returns the transformed output ([out] or [B x out]).
Tensor mlp_forward(const MLPParams& params, const Tensor& input,
                   ForwardCache* cache = nullptr);

// logit_grad is the loss gradient w.r.t. the *pre-transform* output (same
// shape as the last layer's output). Gradients are accumulated into
// grads_acc; pass a zeroed MLPGrads for plain gradients. input_grad, when
// non-null, is overwritten with dLoss/dInput.
void mlp_backward(const MLPParams& params, const ForwardCache& cache,
                  const Tensor& logit_grad, MLPGrads& grads_acc,
                  Tensor* input_grad = nullptr);

// Layer primitives for hand-composed nets (the policy trunk/heads).
// x: [B x in] -> out: [B x out].
void dense_forward(const DenseLayer& layer, const Tensor& x, Tensor& out);
// Accumulates dW/db into gacc; writes dx into gx when non-null (overwrites).
void dense_backward(const DenseLayer& layer, const Tensor& x,
                    const Tensor& gout, DenseLayer& gacc, Tensor* gx);

void relu_inplace(Tensor& t);
// g *= 1[pre > 0]
void relu_backward_inplace(Tensor& g, const Tensor& pre);
// Rowwise stable softmax of logits.
Tensor softmax_rows(const Tensor& logits);

std::vector<Tensor*> param_tensors(MLPParams& p);
std::vector<const Tensor*> param_tensors(const MLPParams& p);
std::vector<const Tensor*> grad_tensors(const MLPGrads& g);

}  // namespace ecmaze

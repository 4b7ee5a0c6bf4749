#include "ecmaze/mlp.hpp"

#include <cmath>

#include "ecmaze/kernels.hpp"

namespace ecmaze {

DenseLayer make_dense(int in, int out, Rng& rng) {
  DenseLayer layer{Tensor({out, in}), Tensor({out})};
  const double bound = std::sqrt(6.0 / (in + out));
  for (std::size_t i = 0; i < layer.w.size(); ++i) {
    layer.w[i] = rng.uniform(-bound, bound);
  }
  return layer;
}

MLPParams make_mlp(const std::vector<int>& dims, Activation hidden,
                   OutputTransform output, Rng& rng) {
  if (dims.size() < 2) throw ConfigError("make_mlp: need at least two dims");
  MLPParams params;
  params.hidden_activation = hidden;
  params.output_transform = output;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    params.layers.push_back(make_dense(dims[i], dims[i + 1], rng));
  }
  return params;
}

void MLPGrads::zero() {
  for (auto& l : layers) {
    l.w.fill(0.0);
    l.b.fill(0.0);
  }
}

MLPGrads make_grads(const MLPParams& params) {
  MLPGrads g;
  for (const auto& l : params.layers) {
    g.layers.push_back({Tensor({l.out(), l.in()}), Tensor({l.out()})});
  }
  return g;
}

void dense_forward(const DenseLayer& layer, const Tensor& x, Tensor& out) {
  const int batch = x.rows();
  const int in = layer.in();
  const int nout = layer.out();
  if (x.cols() != in) throw ConfigError("dense_forward: input dim mismatch");
  out = Tensor({batch, nout});
  for (int r = 0; r < batch; ++r) {
    for (int c = 0; c < nout; ++c) out.at(r, c) = layer.b[c];
  }
  // out[B x out] += x[B x in] * W[out x in]^T
  kernels::active().gemm_abt_acc(out.data(), x.data(), layer.w.data(), batch,
                                 in, nout);
}

void dense_backward(const DenseLayer& layer, const Tensor& x,
                    const Tensor& gout, DenseLayer& gacc, Tensor* gx) {
  const int batch = x.rows();
  const int in = layer.in();
  const int nout = layer.out();
  // dW[out x in] += gout^T[out x B] * x[B x in]
  kernels::active().gemm_atb_acc(gacc.w.data(), gout.data(), x.data(), batch,
                                 nout, in);
  for (int r = 0; r < batch; ++r) {
    kernels::active().add(gacc.b.data(), gout.row(r), nout);
  }
  if (gx) {
    *gx = Tensor({batch, in});
    // dx[B x in] = gout[B x out] * W[out x in]
    kernels::active().gemm_acc(gx->data(), gout.data(), layer.w.data(), batch,
                               nout, in);
  }
}

void relu_inplace(Tensor& t) {
  kernels::active().relu(t.data(), t.data(), t.size());
}

void relu_backward_inplace(Tensor& g, const Tensor& pre) {
  kernels::active().relu_bwd(g.data(), pre.data(), g.size());
}

Tensor softmax_rows(const Tensor& logits) {
  Tensor out = logits;
  const int batch = out.rows();
  const int n = out.cols();
  for (int r = 0; r < batch; ++r) {
    double* row = out.data() + static_cast<std::size_t>(r) * n;
    double mx = row[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, row[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      row[i] = std::exp(row[i] - mx);
      sum += row[i];
    }
    for (int i = 0; i < n; ++i) row[i] /= sum;
  }
  return out;
}

namespace {

Tensor as_batch(const Tensor& t, int expected_cols, const char* who) {
  // Rank 2 is a batch (rows = samples); anything else is one sample,
  // flattened (observations arrive as [C x H x W]).
  if (t.rank() == 2) {
    if (t.cols() != expected_cols) throw ConfigError(std::string(who) + ": input dim mismatch");
    return t;
  }
  if (static_cast<int>(t.size()) != expected_cols) {
    throw ConfigError(std::string(who) + ": input dim mismatch");
  }
  return Tensor::from({1, expected_cols},
                      std::vector<double>(t.data(), t.data() + t.size()));
}

Tensor unbatch(Tensor t, bool single) {
  if (!single) return t;
  const int n = t.cols();
  return Tensor::from({n}, std::vector<double>(t.data(), t.data() + t.size()));
}

void apply_output_transform(OutputTransform transform, Tensor& t) {
  switch (transform) {
    case OutputTransform::kIdentity:
      break;
    case OutputTransform::kSigmoid:
      for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = 1.0 / (1.0 + std::exp(-t[i]));
      }
      break;
    case OutputTransform::kSoftmax:
      t = softmax_rows(t);
      break;
  }
}

}  // namespace

Tensor mlp_forward(const MLPParams& params, const Tensor& input,
                   ForwardCache* cache) {
  if (params.layers.empty()) throw ConfigError("mlp_forward: empty net");
  const bool single = input.rank() != 2;
  Tensor x = as_batch(input, params.input_dim(), "mlp_forward");

  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.pre.clear();
  c.act.clear();
  c.input = x;
  c.batch = x.rows();
  c.single = single;

  const std::size_t nlayers = params.layers.size();
  Tensor cur = std::move(x);
  for (std::size_t li = 0; li < nlayers; ++li) {
    Tensor pre;
    dense_forward(params.layers[li], cur, pre);
    c.pre.push_back(pre);
    if (li + 1 < nlayers && params.hidden_activation == Activation::kRelu) {
      relu_inplace(pre);
    }
    c.act.push_back(pre);
    cur = std::move(pre);
  }
  apply_output_transform(params.output_transform, cur);
  c.output = cur;
  return unbatch(std::move(cur), single);
}

void mlp_backward(const MLPParams& params, const ForwardCache& cache,
                  const Tensor& logit_grad, MLPGrads& grads_acc,
                  Tensor* input_grad) {
  const std::size_t nlayers = params.layers.size();
  if (cache.pre.size() != nlayers || grads_acc.layers.size() != nlayers) {
    throw UsageError("mlp_backward: cache does not match params");
  }
  if (cache.input.cols() != params.input_dim()) {
    throw UsageError("mlp_backward: cache input dim does not match params");
  }
  Tensor g = as_batch(logit_grad, params.output_dim(), "mlp_backward");
  if (g.rows() != cache.batch) {
    throw UsageError("mlp_backward: grad batch does not match cache");
  }

  for (std::size_t li = nlayers; li-- > 0;) {
    const Tensor& layer_in = (li == 0) ? cache.input : cache.act[li - 1];
    if (cache.pre[li].rows() != g.rows() ||
        cache.pre[li].cols() != g.cols()) {
      throw UsageError("mlp_backward: cache layer shape mismatch");
    }
    Tensor gx;
    const bool need_gx = li > 0 || input_grad != nullptr;
    dense_backward(params.layers[li], layer_in, g, grads_acc.layers[li],
                   need_gx ? &gx : nullptr);
    if (li > 0) {
      if (params.hidden_activation == Activation::kRelu) {
        relu_backward_inplace(gx, cache.pre[li - 1]);
      }
      g = std::move(gx);
    } else if (input_grad) {
      *input_grad = unbatch(std::move(gx), cache.single);
    }
  }
}

std::vector<Tensor*> param_tensors(MLPParams& p) {
  std::vector<Tensor*> out;
  for (auto& l : p.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

std::vector<const Tensor*> param_tensors(const MLPParams& p) {
  std::vector<const Tensor*> out;
  for (const auto& l : p.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

std::vector<const Tensor*> grad_tensors(const MLPGrads& g) {
  std::vector<const Tensor*> out;
  for (const auto& l : g.layers) {
    out.push_back(&l.w);
    out.push_back(&l.b);
  }
  return out;
}

}  // namespace ecmaze

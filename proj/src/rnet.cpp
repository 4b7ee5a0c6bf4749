#include "ecmaze/rnet.hpp"

#include <cmath>

#include "ecmaze/kernels.hpp"
#include "ecmaze/losses.hpp"

namespace ecmaze {

const char* comparator_name(ComparatorKind kind) {
  return kind == ComparatorKind::kConcatMlp ? "concat_mlp" : "dot_sigmoid";
}

ComparatorKind comparator_from_name(const std::string& name) {
  if (name == "concat_mlp") return ComparatorKind::kConcatMlp;
  if (name == "dot_sigmoid") return ComparatorKind::kDotSigmoid;
  throw ConfigError("unknown comparator: " + name);
}

RNetwork make_rnetwork(int obs_dim, int embedding_dim, int hidden,
                       ComparatorKind comparator, bool shared, Rng& rng) {
  if (obs_dim <= 0 || embedding_dim <= 0 || hidden <= 0) {
    throw ConfigError("make_rnetwork: dimensions must be positive");
  }
  RNetwork net;
  net.shared = shared;
  net.comparator = comparator;
  net.embedding_dim = embedding_dim;
  net.branch_a = make_mlp({obs_dim, hidden, hidden, embedding_dim},
                          Activation::kRelu, OutputTransform::kIdentity, rng);
  if (!shared) {
    net.branch_b = make_mlp({obs_dim, hidden, hidden, embedding_dim},
                            Activation::kRelu, OutputTransform::kIdentity, rng);
  }
  if (comparator == ComparatorKind::kConcatMlp) {
    net.comparator_mlp =
        make_mlp({2 * embedding_dim, hidden, hidden, 1}, Activation::kRelu,
                 OutputTransform::kIdentity, rng);
  }
  return net;
}

Tensor embed(const RNetwork& net, const Tensor& obs) {
  return mlp_forward(net.memory_branch(), obs);
}

Tensor embed_query(const RNetwork& net, const Tensor& obs) {
  return mlp_forward(net.query_branch(), obs);
}

double compare_logit(const RNetwork& net, const Tensor& e_mem,
                     const Tensor& e_query) {
  const int n = net.embedding_dim;
  if (static_cast<int>(e_mem.size()) != n ||
      static_cast<int>(e_query.size()) != n) {
    throw ConfigError("compare: embedding dimension mismatch");
  }
  if (net.comparator == ComparatorKind::kDotSigmoid) {
    return kernels::active().dot(e_mem.data(), e_query.data(), n);
  }
  Tensor cat({2 * n});
  for (int i = 0; i < n; ++i) {
    cat[i] = e_mem[i];
    cat[n + i] = e_query[i];
  }
  return mlp_forward(net.comparator_mlp, cat)[0];
}

double compare(const RNetwork& net, const Tensor& e_mem, const Tensor& e_query) {
  return sigmoid(compare_logit(net, e_mem, e_query));
}

double predict_pair(const RNetwork& net, const Tensor& obs_i,
                    const Tensor& obs_j) {
  return compare(net, embed(net, obs_i), embed_query(net, obs_j));
}

double validation_accuracy(const RNetwork& net, const PairDataset& dataset) {
  if (dataset.items.empty()) {
    throw UsageError("validation_accuracy: empty dataset");
  }
  const int obs_dim = net.branch_a.input_dim();
  const std::size_t total = dataset.size();
  std::size_t correct = 0;
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < total; start += kChunk) {
    const std::size_t count = std::min(kChunk, total - start);
    Tensor xa({static_cast<int>(count), obs_dim});
    Tensor xb({static_cast<int>(count), obs_dim});
    for (std::size_t r = 0; r < count; ++r) {
      const Tensor& a = dataset.first(start + r);
      const Tensor& b = dataset.second(start + r);
      if (static_cast<int>(a.size()) != obs_dim ||
          static_cast<int>(b.size()) != obs_dim) {
        throw ConfigError("validation_accuracy: observation size mismatch");
      }
      for (int c = 0; c < obs_dim; ++c) {
        xa.at(static_cast<int>(r), c) = a[c];
        xb.at(static_cast<int>(r), c) = b[c];
      }
    }
    Tensor ea = embed(net, xa);
    Tensor eb = embed_query(net, xb);
    const int n = net.embedding_dim;
    for (std::size_t r = 0; r < count; ++r) {
      double logit;
      if (net.comparator == ComparatorKind::kDotSigmoid) {
        logit = kernels::active().dot(ea.row(static_cast<int>(r)),
                                      eb.row(static_cast<int>(r)), n);
      } else {
        Tensor cat({2 * n});
        for (int i = 0; i < n; ++i) {
          cat[i] = ea.at(static_cast<int>(r), i);
          cat[n + i] = eb.at(static_cast<int>(r), i);
        }
        logit = mlp_forward(net.comparator_mlp, cat)[0];
      }
      const int predicted = logit >= 0.0 ? 1 : 0;  // tie -> reachable
      correct += predicted == dataset.items[start + r].label;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace ecmaze

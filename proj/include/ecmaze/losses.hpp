#pragma once

#include <cmath>

#include "ecmaze/common.hpp"

namespace ecmaze {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^z) without overflow.
inline double softplus(double z) {
  const double m = z > 0.0 ? z : 0.0;
  return m + std::log1p(std::exp(-std::abs(z)));
}

struct LogisticLoss {
  double loss;
  double dlogit;  // d loss / d logit = sigmoid(z) - y
};

// Binary cross-entropy on a raw logit, stabilized: loss = softplus(z) - y*z.
inline LogisticLoss logistic_loss(double logit, int label) {
  if (label != 0 && label != 1) {
    throw UsageError("logistic_loss: label must be 0 or 1");
  }
  return {softplus(logit) - label * logit, sigmoid(logit) - label};
}

}  // namespace ecmaze

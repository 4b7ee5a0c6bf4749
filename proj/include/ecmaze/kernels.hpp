#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ecmaze::kernels {

// Flat f64 kernels behind the Tensor/MLP layer. All matrices are row-major
// and densely packed. Output buffers must not alias inputs.
//
// Two implementations exist: a scalar reference (the semantic ground truth)
// and an AVX2+FMA variant. The active one is picked at runtime from CPU
// features, overridable with ECMAZE_KERNELS=scalar|avx2 or set_active().
// SIMD reductions reorder sums, so the variants agree to rounding, not
// bit-exactly; the equivalence suite pins the tolerance.
struct Ops {
  const char* name;

  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // x *= a
  void (*scal)(double* x, double a, std::size_t n);
  // y += x
  void (*add)(double* y, const double* x, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_acc)(double* c, const double* a, const double* b, std::size_t m,
                   std::size_t k, std::size_t n);
  // C[k x n] += A^T * B  with A[m x k], B[m x n]
  void (*gemm_atb_acc)(double* c, const double* a, const double* b,
                       std::size_t m, std::size_t k, std::size_t n);
  // C[m x n] += A * B^T  with A[m x k], B[n x k]
  void (*gemm_abt_acc)(double* c, const double* a, const double* b,
                       std::size_t m, std::size_t k, std::size_t n);
  // y = max(x, 0)
  void (*relu)(double* y, const double* x, std::size_t n);
  // g[i] = pre[i] > 0 ? g[i] : 0
  void (*relu_bwd)(double* g, const double* pre, std::size_t n);
  // Bias-corrected Adam update. bc1 = 1 - beta1^t, bc2 = 1 - beta2^t.
  void (*adam)(double* p, double* m, double* v, const double* g, std::size_t n,
               double lr, double beta1, double beta2, double eps, double bc1,
               double bc2);
};

const Ops& scalar_ops();

// True when the running CPU supports the AVX2+FMA variant.
bool avx2_available();

// nullptr when the name is unknown or the variant cannot run here.
const Ops* ops_by_name(std::string_view name);

std::vector<std::string> available_backends();

// The backend in use. First call resolves ECMAZE_KERNELS (auto when unset).
const Ops& active();

// Switch backend (tests, CLI flag). Returns false if unavailable.
bool set_active(std::string_view name);

}  // namespace ecmaze::kernels

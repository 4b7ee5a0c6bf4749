// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma on
// x86; dispatch.cpp only hands these out after a runtime CPU check, so the
// rest of the binary stays runnable on baseline hardware.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "ecmaze/kernels.hpp"

namespace ecmaze::kernels {
namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double result = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) result += x[i] * y[i];
  return result;
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yd = _mm256_loadu_pd(y + i);
    yd = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yd);
    _mm256_storeu_pd(y + i, yd);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void add_avx2(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

// Inner block shared by gemm_acc / gemm_atb_acc: crow += sum_q a[q]*brow[q],
// with up to four (a, brow) pairs fused per pass over crow.
inline void row_update4(double* crow, const double* a0, const double* b0,
                        const double* a1, const double* b1, const double* a2,
                        const double* b2, const double* a3, const double* b3,
                        std::size_t n) {
  const __m256d av0 = _mm256_set1_pd(*a0);
  const __m256d av1 = _mm256_set1_pd(*a1);
  const __m256d av2 = _mm256_set1_pd(*a2);
  const __m256d av3 = _mm256_set1_pd(*a3);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d c = _mm256_loadu_pd(crow + j);
    c = _mm256_fmadd_pd(av0, _mm256_loadu_pd(b0 + j), c);
    c = _mm256_fmadd_pd(av1, _mm256_loadu_pd(b1 + j), c);
    c = _mm256_fmadd_pd(av2, _mm256_loadu_pd(b2 + j), c);
    c = _mm256_fmadd_pd(av3, _mm256_loadu_pd(b3 + j), c);
    _mm256_storeu_pd(crow + j, c);
  }
  for (; j < n; ++j) {
    crow[j] += *a0 * b0[j] + *a1 * b1[j] + *a2 * b2[j] + *a3 * b3[j];
  }
}

inline void row_update1(double* crow, double a, const double* brow,
                        std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d c = _mm256_loadu_pd(crow + j);
    c = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), c);
    _mm256_storeu_pd(crow + j, c);
  }
  for (; j < n; ++j) crow[j] += a * brow[j];
}

void gemm_acc_avx2(double* c, const double* a, const double* b, std::size_t m,
                   std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    std::size_t p = 0;
    for (; p + 4 <= k; p += 4) {
      row_update4(crow, arow + p, b + p * n, arow + p + 1, b + (p + 1) * n,
                  arow + p + 2, b + (p + 2) * n, arow + p + 3, b + (p + 3) * n,
                  n);
    }
    for (; p < k; ++p) row_update1(crow, arow[p], b + p * n, n);
  }
}

void gemm_atb_acc_avx2(double* c, const double* a, const double* b,
                       std::size_t m, std::size_t k, std::size_t n) {
  // C[k x n] += A^T B. Iterate over output rows p, accumulate the i-sum in
  // blocks of four to cut store traffic on crow.
  for (std::size_t p = 0; p < k; ++p) {
    double* crow = c + p * n;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      row_update4(crow, a + i * k + p, b + i * n, a + (i + 1) * k + p,
                  b + (i + 1) * n, a + (i + 2) * k + p, b + (i + 2) * n,
                  a + (i + 3) * k + p, b + (i + 3) * n, n);
    }
    for (; i < m; ++i) row_update1(crow, a[i * k + p], b + i * n, n);
  }
}

void gemm_abt_acc_avx2(double* c, const double* a, const double* b,
                       std::size_t m, std::size_t k, std::size_t n) {
  // C[m x n] += A B^T: every output element is a length-k dot. Four B rows
  // share one pass over the A row.
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* b0 = b + j * k;
      const double* b1 = b + (j + 1) * k;
      const double* b2 = b + (j + 2) * k;
      const double* b3 = b + (j + 3) * k;
      __m256d s0 = _mm256_setzero_pd();
      __m256d s1 = _mm256_setzero_pd();
      __m256d s2 = _mm256_setzero_pd();
      __m256d s3 = _mm256_setzero_pd();
      std::size_t q = 0;
      for (; q + 4 <= k; q += 4) {
        const __m256d av = _mm256_loadu_pd(arow + q);
        s0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + q), s0);
        s1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + q), s1);
        s2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b2 + q), s2);
        s3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b3 + q), s3);
      }
      // Horizontal reduce the four accumulators into one vector.
      __m256d h01 = _mm256_hadd_pd(s0, s1);
      __m256d h23 = _mm256_hadd_pd(s2, s3);
      __m256d swap = _mm256_permute2f128_pd(h01, h23, 0x21);
      __m256d blend = _mm256_blend_pd(h01, h23, 0b1100);
      __m256d sums = _mm256_add_pd(swap, blend);
      double tail0 = 0.0, tail1 = 0.0, tail2 = 0.0, tail3 = 0.0;
      for (; q < k; ++q) {
        tail0 += arow[q] * b0[q];
        tail1 += arow[q] * b1[q];
        tail2 += arow[q] * b2[q];
        tail3 += arow[q] * b3[q];
      }
      __m256d tails = _mm256_set_pd(tail3, tail2, tail1, tail0);
      __m256d out = _mm256_add_pd(_mm256_loadu_pd(crow + j),
                                  _mm256_add_pd(sums, tails));
      _mm256_storeu_pd(crow + j, out);
    }
    for (; j < n; ++j) crow[j] += dot_avx2(arow, b + j * k, k);
  }
}

void relu_avx2(double* y, const double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd_avx2(double* g, const double* pre, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), mask));
  }
  for (; i < n; ++i) {
    if (!(pre[i] > 0.0)) g[i] = 0.0;
  }
}

void adam_avx2(double* p, double* m, double* v, const double* g, std::size_t n,
               double lr, double beta1, double beta2, double eps, double bc1,
               double bc2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d onemb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d onemb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d inv_bc1 = _mm256_set1_pd(1.0 / bc1);
  const __m256d inv_bc2 = _mm256_set1_pd(1.0 / bc2);
  const __m256d lrv = _mm256_set1_pd(lr);
  const __m256d epsv = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    mv = _mm256_fmadd_pd(onemb1, gv, _mm256_mul_pd(b1, mv));
    vv = _mm256_fmadd_pd(onemb2, _mm256_mul_pd(gv, gv), _mm256_mul_pd(b2, vv));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(mv, inv_bc1);
    const __m256d vhat = _mm256_mul_pd(vv, inv_bc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
    const __m256d upd = _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), upd));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

}  // namespace

const Ops& avx2_ops_impl() {
  static const Ops ops = {
      "avx2",           dot_avx2,      axpy_avx2,
      scal_avx2,        add_avx2,      gemm_acc_avx2,
      gemm_atb_acc_avx2, gemm_abt_acc_avx2, relu_avx2,
      relu_bwd_avx2,    adam_avx2,
  };
  return ops;
}

}  // namespace ecmaze::kernels

#endif  // x86

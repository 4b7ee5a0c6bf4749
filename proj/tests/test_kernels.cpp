#include <doctest.h>

#include <cmath>
#include <vector>

#include "ecmaze/common.hpp"
#include "ecmaze/kernels.hpp"

using namespace ecmaze;
namespace k = ecmaze::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -2.0,
                               double hi = 2.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(1.0, std::abs(a[i]));
    CHECK(std::abs(a[i] - b[i]) / scale <= tol);
  }
}

constexpr double kTol = 1e-12;

}  // namespace

TEST_CASE("scalar and simd kernels agree") {
  const k::Ops& ref = k::scalar_ops();
  const k::Ops* simd = k::ops_by_name("avx2");
  if (!simd) {
    MESSAGE("avx2 backend unavailable on this host; skipping equivalence");
    return;
  }
  Rng rng(1234);

  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 33u, 64u, 225u, 1000u}) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);

    CHECK(std::abs(ref.dot(x.data(), y.data(), n) -
                   simd->dot(x.data(), y.data(), n)) <=
          kTol * std::max(1.0, std::abs(ref.dot(x.data(), y.data(), n))));

    auto y1 = y, y2 = y;
    ref.axpy(y1.data(), 0.37, x.data(), n);
    simd->axpy(y2.data(), 0.37, x.data(), n);
    check_close(y1, y2, kTol);

    y1 = y;
    y2 = y;
    ref.scal(y1.data(), -1.25, n);
    simd->scal(y2.data(), -1.25, n);
    check_close(y1, y2, kTol);

    y1 = y;
    y2 = y;
    ref.add(y1.data(), x.data(), n);
    simd->add(y2.data(), x.data(), n);
    check_close(y1, y2, kTol);

    y1 = y;
    y2 = y;
    ref.relu(y1.data(), x.data(), n);
    simd->relu(y2.data(), x.data(), n);
    check_close(y1, y2, 0.0);

    y1 = y;
    y2 = y;
    ref.relu_bwd(y1.data(), x.data(), n);
    simd->relu_bwd(y2.data(), x.data(), n);
    check_close(y1, y2, 0.0);
  }
}

TEST_CASE("gemm variants match the scalar reference") {
  const k::Ops& ref = k::scalar_ops();
  const k::Ops* simd = k::ops_by_name("avx2");
  if (!simd) return;
  Rng rng(99);

  struct Dims {
    std::size_t m, k, n;
  };
  for (Dims d : {Dims{1, 1, 1}, Dims{2, 3, 4}, Dims{5, 7, 3}, Dims{8, 16, 8},
                 Dims{13, 21, 17}, Dims{64, 225, 64}, Dims{33, 64, 1}}) {
    auto a = random_vec(d.m * d.k, rng);
    auto b = random_vec(d.k * d.n, rng);
    auto c0 = random_vec(d.m * d.n, rng);

    auto c1 = c0, c2 = c0;
    ref.gemm_acc(c1.data(), a.data(), b.data(), d.m, d.k, d.n);
    simd->gemm_acc(c2.data(), a.data(), b.data(), d.m, d.k, d.n);
    check_close(c1, c2, kTol);

    // A[m x k], B[m x n] -> C[k x n]
    auto bt = random_vec(d.m * d.n, rng);
    auto cat1 = random_vec(d.k * d.n, rng);
    auto cat2 = cat1;
    ref.gemm_atb_acc(cat1.data(), a.data(), bt.data(), d.m, d.k, d.n);
    simd->gemm_atb_acc(cat2.data(), a.data(), bt.data(), d.m, d.k, d.n);
    check_close(cat1, cat2, kTol);

    // A[m x k], B[n x k] -> C[m x n]
    auto bb = random_vec(d.n * d.k, rng);
    auto cab1 = c0, cab2 = c0;
    ref.gemm_abt_acc(cab1.data(), a.data(), bb.data(), d.m, d.k, d.n);
    simd->gemm_abt_acc(cab2.data(), a.data(), bb.data(), d.m, d.k, d.n);
    check_close(cab1, cab2, kTol);
  }
}

TEST_CASE("adam kernel equivalence") {
  const k::Ops& ref = k::scalar_ops();
  const k::Ops* simd = k::ops_by_name("avx2");
  if (!simd) return;
  Rng rng(7);
  for (std::size_t n : {1u, 4u, 5u, 64u, 129u}) {
    auto p1 = random_vec(n, rng);
    auto m1 = random_vec(n, rng, 0.0, 0.1);
    auto v1 = random_vec(n, rng, 0.0, 0.1);
    auto g = random_vec(n, rng);
    auto p2 = p1, m2 = m1, v2 = v1;
    ref.adam(p1.data(), m1.data(), v1.data(), g.data(), n, 1e-3, 0.9, 0.999,
             1e-8, 0.1, 0.001);
    simd->adam(p2.data(), m2.data(), v2.data(), g.data(), n, 1e-3, 0.9, 0.999,
               1e-8, 0.1, 0.001);
    check_close(p1, p2, 1e-11);
    check_close(m1, m2, kTol);
    check_close(v1, v2, kTol);
  }
}

TEST_CASE("backend dispatch") {
  CHECK(k::ops_by_name("scalar") != nullptr);
  CHECK(k::ops_by_name("nope") == nullptr);
  const std::string prev = k::active().name;
  CHECK(k::set_active("scalar"));
  CHECK(std::string(k::active().name) == "scalar");
  CHECK(k::set_active(prev));
  CHECK_FALSE(k::set_active("bogus"));
}

#include <cmath>
#include <vector>

#include "doctest.h"
#include "vizrec/common/rng.hpp"
#include "vizrec/kernels/kernels.hpp"

using namespace vizrec;

namespace {

template <typename T>
std::vector<T> random_vec(std::size_t n, Rng& rng) {
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(rng.uniform() * 2 - 1);
  return v;
}

struct IsaGuard {
  kernels::Isa saved = kernels::active_isa();
  ~IsaGuard() { kernels::set_isa(saved); }
};

// naive reference in long double
template <typename T>
std::vector<long double> reference_gemm(std::size_t m, std::size_t n, std::size_t k, const std::vector<T>& a,
                                        const std::vector<T>& b, T beta, const std::vector<T>& c) {
  std::vector<long double> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = beta == T(0) ? 0.0L : static_cast<long double>(beta) * c[i * n + j];
      for (std::size_t p = 0; p < k; ++p) s += static_cast<long double>(a[i * k + p]) * b[p * n + j];
      out[i * n + j] = s;
    }
  return out;
}

template <typename T>
void check_gemm_family(kernels::Isa isa, double tol) {
  IsaGuard guard;
  kernels::set_isa(isa);
  Rng rng(11);
  const std::size_t shapes[][3] = {{1, 1, 1}, {5, 7, 3}, {6, 16, 256}, {13, 33, 300}, {70, 17, 5}, {7, 1030, 9}, {3, 4, 0}};
  for (const auto& s : shapes) {
    const std::size_t m = s[0], n = s[1], k = s[2];
    const auto a = random_vec<T>(m * k, rng);
    const auto b = random_vec<T>(k * n, rng);
    for (T beta : {T(0), T(1), T(0.5)}) {
      auto c = random_vec<T>(m * n, rng);
      const auto ref = reference_gemm(m, n, k, a, b, beta, c);
      kernels::gemm(m, n, k, a.data(), k, b.data(), n, beta, c.data(), n);
      for (std::size_t i = 0; i < m * n; ++i) CHECK(std::abs(static_cast<long double>(c[i]) - ref[i]) < tol * (1 + k));

      // A^T stored k x m, B^T stored n x k
      std::vector<T> at(k * m), bt(n * k);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) at[p * m + i] = a[i * k + p];
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t j = 0; j < n; ++j) bt[j * k + p] = b[p * n + j];
      auto c2 = random_vec<T>(m * n, rng);
      const auto ref2 = reference_gemm(m, n, k, a, b, beta, c2);
      kernels::gemm_tn(m, n, k, at.data(), m, b.data(), n, beta, c2.data(), n);
      for (std::size_t i = 0; i < m * n; ++i) CHECK(std::abs(static_cast<long double>(c2[i]) - ref2[i]) < tol * (1 + k));
      auto c3 = random_vec<T>(m * n, rng);
      const auto ref3 = reference_gemm(m, n, k, a, b, beta, c3);
      kernels::gemm_nt(m, n, k, a.data(), k, bt.data(), k, beta, c3.data(), n);
      for (std::size_t i = 0; i < m * n; ++i) CHECK(std::abs(static_cast<long double>(c3[i]) - ref3[i]) < tol * (1 + k));
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels match a long-double reference") {
  check_gemm_family<double>(kernels::Isa::scalar, 1e-13);
  check_gemm_family<float>(kernels::Isa::scalar, 1e-5);
}

TEST_CASE("avx2 kernels match a long-double reference") {
  if (!kernels::isa_supported(kernels::Isa::avx2)) return;
  check_gemm_family<double>(kernels::Isa::avx2, 1e-13);
  check_gemm_family<float>(kernels::Isa::avx2, 1e-5);
}

TEST_CASE("scalar and avx2 vector kernels agree") {
  if (!kernels::isa_supported(kernels::Isa::avx2)) return;
  IsaGuard guard;
  Rng rng(3);
  for (std::size_t n : {0, 1, 3, 4, 8, 15, 16, 17, 33, 100, 1001}) {
    const auto a = random_vec<double>(n, rng), b = random_vec<double>(n, rng);
    const auto af = random_vec<float>(n, rng), bf = random_vec<float>(n, rng);
    kernels::set_isa(kernels::Isa::scalar);
    const double d0 = kernels::dot(a, b), s0 = kernels::squared_distance(a, b);
    const float f0 = kernels::dot(af, bf), g0 = kernels::squared_distance(af, bf);
    std::vector<double> y0 = b;
    kernels::axpy(0.3, a, y0);
    kernels::set_isa(kernels::Isa::avx2);
    CHECK(std::abs(kernels::dot(a, b) - d0) < 1e-12 * (1 + static_cast<double>(n)));
    CHECK(std::abs(kernels::squared_distance(a, b) - s0) < 1e-12 * (1 + static_cast<double>(n)));
    CHECK(std::abs(kernels::dot(af, bf) - f0) < 1e-5f * (1 + static_cast<float>(n)));
    CHECK(std::abs(kernels::squared_distance(af, bf) - g0) < 1e-5f * (1 + static_cast<float>(n)));
    std::vector<double> y1 = b;
    kernels::axpy(0.3, a, y1);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y0[i]) < 1e-15);
  }
}

TEST_CASE("a row's gemm result does not depend on the other rows in the call") {
  for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
    if (!kernels::isa_supported(isa)) continue;
    IsaGuard guard;
    kernels::set_isa(isa);
    Rng rng(5);
    const std::size_t m = 23, n = 41, k = 300;
    const auto a = random_vec<float>(m * k, rng);
    const auto b = random_vec<float>(k * n, rng);
    std::vector<float> full(m * n);
    kernels::gemm(m, n, k, a.data(), k, b.data(), n, 0.f, full.data(), n);
    for (std::size_t r : {0, 5, 13, 22}) {
      std::vector<float> one(n);
      kernels::gemm(1, n, k, a.data() + r * k, k, b.data(), n, 0.f, one.data(), n);
      for (std::size_t j = 0; j < n; ++j) CHECK(one[j] == full[r * n + j]);
    }
  }
}

TEST_CASE("kernel selection") {
  CHECK(kernels::parse_isa("scalar") == kernels::Isa::scalar);
  CHECK_THROWS(kernels::parse_isa("sse9"));
  CHECK(kernels::isa_supported(kernels::Isa::scalar));
  IsaGuard guard;
  kernels::set_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
}

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "table.hpp"

namespace vizrec::kernels::detail {

namespace {

struct F64 {
  using T = double;
  using V = __m256d;
  static constexpr std::size_t width = 4;
  static V zero() { return _mm256_setzero_pd(); }
  static V load(const T* p) { return _mm256_loadu_pd(p); }
  static void store(T* p, V v) { _mm256_storeu_pd(p, v); }
  static V set1(T v) { return _mm256_set1_pd(v); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
  static V sub(V a, V b) { return _mm256_sub_pd(a, b); }
  static V add(V a, V b) { return _mm256_add_pd(a, b); }
  static V mul(V a, V b) { return _mm256_mul_pd(a, b); }
  static T hsum(V v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  }
};

struct F32 {
  using T = float;
  using V = __m256;
  static constexpr std::size_t width = 8;
  static V zero() { return _mm256_setzero_ps(); }
  static V load(const T* p) { return _mm256_loadu_ps(p); }
  static void store(T* p, V v) { _mm256_storeu_ps(p, v); }
  static V set1(T v) { return _mm256_set1_ps(v); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_ps(a, b, c); }
  static V sub(V a, V b) { return _mm256_sub_ps(a, b); }
  static V add(V a, V b) { return _mm256_add_ps(a, b); }
  static V mul(V a, V b) { return _mm256_mul_ps(a, b); }
  static T hsum(V v) {
    const __m128 lo = _mm256_castps256_ps128(v);
    const __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 0x55));
    return _mm_cvtss_f32(s);
  }
};

template <typename O>
typename O::T dot(const typename O::T* a, const typename O::T* b, std::size_t n) {
  constexpr std::size_t w = O::width;
  auto s0 = O::zero(), s1 = O::zero(), s2 = O::zero(), s3 = O::zero();
  std::size_t i = 0;
  for (; i + 4 * w <= n; i += 4 * w) {
    s0 = O::fma(O::load(a + i), O::load(b + i), s0);
    s1 = O::fma(O::load(a + i + w), O::load(b + i + w), s1);
    s2 = O::fma(O::load(a + i + 2 * w), O::load(b + i + 2 * w), s2);
    s3 = O::fma(O::load(a + i + 3 * w), O::load(b + i + 3 * w), s3);
  }
  for (; i + w <= n; i += w) s0 = O::fma(O::load(a + i), O::load(b + i), s0);
  typename O::T s = O::hsum(O::add(O::add(s0, s1), O::add(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename O>
typename O::T squared_distance(const typename O::T* a, const typename O::T* b, std::size_t n) {
  constexpr std::size_t w = O::width;
  auto s0 = O::zero(), s1 = O::zero();
  std::size_t i = 0;
  for (; i + 2 * w <= n; i += 2 * w) {
    const auto d0 = O::sub(O::load(a + i), O::load(b + i));
    const auto d1 = O::sub(O::load(a + i + w), O::load(b + i + w));
    s0 = O::fma(d0, d0, s0);
    s1 = O::fma(d1, d1, s1);
  }
  for (; i + w <= n; i += w) {
    const auto d = O::sub(O::load(a + i), O::load(b + i));
    s0 = O::fma(d, d, s0);
  }
  typename O::T s = O::hsum(O::add(s0, s1));
  for (; i < n; ++i) {
    const auto d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

template <typename O>
void axpy(typename O::T alpha, const typename O::T* x, typename O::T* y, std::size_t n) {
  constexpr std::size_t w = O::width;
  const auto av = O::set1(alpha);
  std::size_t i = 0;
  for (; i + w <= n; i += w) O::store(y + i, O::fma(av, O::load(x + i), O::load(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Packed, cache-blocked GEMM. B is packed per (KC x NC) block into NR-wide
// column panels, A per (MC x KC) block into MR-high row panels (zero padded),
// and a 6 x (2 vectors) register tile runs over the packed panels. Every element
// of C sees the same operation sequence wherever it sits in the matrix, so the
// result of a row does not depend on which other rows are in the call.
constexpr std::size_t kMr = 6;
constexpr std::size_t kKc = 256;
constexpr std::size_t kMc = 72;
constexpr std::size_t kNc = 1024;

template <typename O>
void micro_kernel(std::size_t kc, const typename O::T* ap, const typename O::T* bp, typename O::V* acc) {
  using V = typename O::V;
  constexpr std::size_t w = O::width;
  V c00 = O::zero(), c01 = O::zero(), c10 = O::zero(), c11 = O::zero(), c20 = O::zero(), c21 = O::zero();
  V c30 = O::zero(), c31 = O::zero(), c40 = O::zero(), c41 = O::zero(), c50 = O::zero(), c51 = O::zero();
  for (std::size_t p = 0; p < kc; ++p, ap += kMr, bp += 2 * w) {
    const V b0 = O::load(bp);
    const V b1 = O::load(bp + w);
    V a = O::set1(ap[0]);
    c00 = O::fma(a, b0, c00);
    c01 = O::fma(a, b1, c01);
    a = O::set1(ap[1]);
    c10 = O::fma(a, b0, c10);
    c11 = O::fma(a, b1, c11);
    a = O::set1(ap[2]);
    c20 = O::fma(a, b0, c20);
    c21 = O::fma(a, b1, c21);
    a = O::set1(ap[3]);
    c30 = O::fma(a, b0, c30);
    c31 = O::fma(a, b1, c31);
    a = O::set1(ap[4]);
    c40 = O::fma(a, b0, c40);
    c41 = O::fma(a, b1, c41);
    a = O::set1(ap[5]);
    c50 = O::fma(a, b0, c50);
    c51 = O::fma(a, b1, c51);
  }
  acc[0] = c00, acc[1] = c01, acc[2] = c10, acc[3] = c11, acc[4] = c20, acc[5] = c21;
  acc[6] = c30, acc[7] = c31, acc[8] = c40, acc[9] = c41, acc[10] = c50, acc[11] = c51;
}

template <typename O>
void gemm(std::size_t m, std::size_t n, std::size_t k, const typename O::T* a, std::size_t rsa, std::size_t csa,
          const typename O::T* b, std::size_t rsb, std::size_t csb, typename O::T beta, typename O::T* c,
          std::size_t ldc) {
  using T = typename O::T;
  using V = typename O::V;
  constexpr std::size_t w = O::width;
  constexpr std::size_t nr = 2 * w;
  if (m == 0 || n == 0) return;
  if (k == 0) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i * ldc + j] = beta == T(0) ? T(0) : beta * c[i * ldc + j];
    return;
  }
  thread_local std::vector<T> bpack, apack;
  bpack.resize(kKc * ((kNc + nr - 1) / nr) * nr);
  apack.resize(kKc * ((kMc + kMr - 1) / kMr) * kMr);
  alignas(32) T tile[kMr * nr];
  V acc[2 * kMr];

  for (std::size_t jc = 0; jc < n; jc += kNc) {
    const std::size_t nc = std::min(kNc, n - jc);
    const std::size_t npanels = (nc + nr - 1) / nr;
    for (std::size_t pc = 0; pc < k; pc += kKc) {
      const std::size_t kc = std::min(kKc, k - pc);
      const T bt = pc == 0 ? beta : T(1);
      for (std::size_t jp = 0; jp < npanels; ++jp) {
        T* dst = bpack.data() + jp * kc * nr;
        const std::size_t j0 = jc + jp * nr;
        const std::size_t cols = std::min(nr, n - j0);
        for (std::size_t p = 0; p < kc; ++p) {
          const T* src = b + (pc + p) * rsb + j0 * csb;
          std::size_t j = 0;
          if (csb == 1) {
            for (; j < cols; ++j) dst[p * nr + j] = src[j];
          } else {
            for (; j < cols; ++j) dst[p * nr + j] = src[j * csb];
          }
          for (; j < nr; ++j) dst[p * nr + j] = T(0);
        }
      }
      for (std::size_t ic = 0; ic < m; ic += kMc) {
        const std::size_t mc = std::min(kMc, m - ic);
        const std::size_t mpanels = (mc + kMr - 1) / kMr;
        for (std::size_t ip = 0; ip < mpanels; ++ip) {
          T* dst = apack.data() + ip * kc * kMr;
          const std::size_t i0 = ic + ip * kMr;
          const std::size_t rows = std::min(kMr, m - i0);
          for (std::size_t p = 0; p < kc; ++p) {
            const T* src = a + i0 * rsa + (pc + p) * csa;
            std::size_t r = 0;
            for (; r < rows; ++r) dst[p * kMr + r] = src[r * rsa];
            for (; r < kMr; ++r) dst[p * kMr + r] = T(0);
          }
        }
        for (std::size_t jp = 0; jp < npanels; ++jp) {
          const std::size_t j0 = jc + jp * nr;
          const std::size_t cols = std::min(nr, n - j0);
          for (std::size_t ip = 0; ip < mpanels; ++ip) {
            const std::size_t i0 = ic + ip * kMr;
            const std::size_t rows = std::min(kMr, m - i0);
            micro_kernel<O>(kc, apack.data() + ip * kc * kMr, bpack.data() + jp * kc * nr, acc);
            if (rows == kMr && cols == nr) {
              for (std::size_t r = 0; r < kMr; ++r) {
                T* cr = c + (i0 + r) * ldc + j0;
                for (std::size_t h = 0; h < 2; ++h) {
                  const V v = acc[2 * r + h];
                  O::store(cr + h * w, bt == T(0) ? v : O::fma(O::set1(bt), O::load(cr + h * w), v));
                }
              }
            } else {
              for (std::size_t r = 0; r < kMr; ++r) {
                O::store(tile + r * nr, acc[2 * r]);
                O::store(tile + r * nr + w, acc[2 * r + 1]);
              }
              for (std::size_t r = 0; r < rows; ++r) {
                T* cr = c + (i0 + r) * ldc + j0;
                for (std::size_t j = 0; j < cols; ++j) {
                  cr[j] = bt == T(0) ? tile[r * nr + j] : std::fma(bt, cr[j], tile[r * nr + j]);
                }
              }
            }
          }
        }
      }
    }
  }
}

template <typename O>
Ops<typename O::T> make_ops() {
  return Ops<typename O::T>{&dot<O>, &squared_distance<O>, &axpy<O>, &gemm<O>};
}

}  // namespace

const Table& avx2_table() {
  static const Table table{make_ops<F64>(), make_ops<F32>()};
  return table;
}

}  // namespace vizrec::kernels::detail

#pragma once

#include <cstddef>

namespace vizrec::kernels::detail {

template <typename T>
struct Ops {
  T (*dot)(const T* a, const T* b, std::size_t n);
  T (*squared_distance)(const T* a, const T* b, std::size_t n);
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // C(m x n) = beta * C + A * B with element (i, p) of A at a[i * rsa + p * csa]
  // and element (p, j) of B at b[p * rsb + j * csb]
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t rsa, std::size_t csa,
               const T* b, std::size_t rsb, std::size_t csb, T beta, T* c, std::size_t ldc);
};

struct Table {
  Ops<double> f64;
  Ops<float> f32;
};

const Table& scalar_table();
#if defined(VIZREC_HAVE_AVX2)
const Table& avx2_table();
#endif

}  // namespace vizrec::kernels::detail

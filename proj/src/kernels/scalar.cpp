#include "table.hpp"

namespace vizrec::kernels::detail {

namespace {

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T squared_distance(const T* a, const T* b, std::size_t n) {
  T s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t rsa, std::size_t csa, const T* b,
          std::size_t rsb, std::size_t csb, T beta, T* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * ldc;
    if (beta == T(0)) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = 0;
    } else if (beta != T(1)) {
      for (std::size_t j = 0; j < n; ++j) crow[j] *= beta;
    }
    for (std::size_t p = 0; p < k; ++p) {
      const T av = a[i * rsa + p * csa];
      const T* brow = b + p * rsb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j * csb];
    }
  }
}

template <typename T>
Ops<T> make_ops() {
  return Ops<T>{&dot<T>, &squared_distance<T>, &axpy<T>, &gemm<T>};
}

}  // namespace

const Table& scalar_table() {
  static const Table table{make_ops<double>(), make_ops<float>()};
  return table;
}

}  // namespace vizrec::kernels::detail

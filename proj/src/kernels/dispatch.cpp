#include <atomic>
#include <cstdlib>
#include <string>
#include <vector>

#include "table.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/kernels/kernels.hpp"

namespace vizrec::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(VIZREC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::Table& table_for(Isa isa) {
#if defined(VIZREC_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table();
#endif
  (void)isa;
  return detail::scalar_table();
}

Isa initial_isa() {
  if (const char* env = std::getenv("VIZREC_KERNELS")) {
    const Isa requested = parse_isa(env);
    if (isa_supported(requested)) return requested;
  }
  return best_supported_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const detail::Table& active() { return table_for(current().load(std::memory_order_relaxed)); }

template <typename T>
const detail::Ops<T>& ops() {
  if constexpr (std::is_same_v<T, double>) {
    return active().f64;
  } else {
    return active().f32;
  }
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  throw UsageError("unknown kernel variant '" + std::string(name) + "' (expected scalar or avx2)");
}

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Isa best_supported_isa() { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return current().load(); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw UsageError("kernel variant " + std::string(isa_name(isa)) + " is not available");
  current().store(isa);
}

double dot(std::span<const double> a, std::span<const double> b) { return ops<double>().dot(a.data(), b.data(), a.size()); }
float dot(std::span<const float> a, std::span<const float> b) { return ops<float>().dot(a.data(), b.data(), a.size()); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  return ops<double>().squared_distance(a.data(), b.data(), a.size());
}
float squared_distance(std::span<const float> a, std::span<const float> b) {
  return ops<float>().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) { ops<double>().axpy(alpha, x.data(), y.data(), x.size()); }
void axpy(float alpha, std::span<const float> x, std::span<float> y) { ops<float>().axpy(alpha, x.data(), y.data(), x.size()); }

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
          std::size_t ldb, double beta, double* c, std::size_t ldc) {
  ops<double>().gemm(m, n, k, a, lda, 1, b, ldb, 1, beta, c, ldc);
}
void gemm(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda, const float* b,
          std::size_t ldb, float beta, float* c, std::size_t ldc) {
  ops<float>().gemm(m, n, k, a, lda, 1, b, ldb, 1, beta, c, ldc);
}
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
             std::size_t ldb, double beta, double* c, std::size_t ldc) {
  ops<double>().gemm(m, n, k, a, 1, lda, b, ldb, 1, beta, c, ldc);
}
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda, const float* b,
             std::size_t ldb, float beta, float* c, std::size_t ldc) {
  ops<float>().gemm(m, n, k, a, 1, lda, b, ldb, 1, beta, c, ldc);
}
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
             std::size_t ldb, double beta, double* c, std::size_t ldc) {
  ops<double>().gemm(m, n, k, a, lda, 1, b, 1, ldb, beta, c, ldc);
}
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda, const float* b,
             std::size_t ldb, float beta, float* c, std::size_t ldc) {
  ops<float>().gemm(m, n, k, a, lda, 1, b, 1, ldb, beta, c, ldc);
}

}  // namespace vizrec::kernels

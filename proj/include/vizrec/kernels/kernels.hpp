#pragma once

#include <cstddef>
#include <span>
#include <string_view>

/// Dense arithmetic inner loops shared by the classifiers. Each entry point has a
/// scalar reference implementation and, on x86-64 builds, an AVX2/FMA variant.
/// The variant is chosen once at startup from CPU support and can be pinned with
/// set_isa() or the VIZREC_KERNELS environment variable ("scalar" / "avx2").
namespace vizrec::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);

/// Best instruction set available in this build on this CPU.
Isa best_supported_isa();
bool isa_supported(Isa isa);
Isa active_isa();
/// Throws UsageError if the requested variant is unavailable.
void set_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
float dot(std::span<const float> a, std::span<const float> b);

double squared_distance(std::span<const double> a, std::span<const double> b);
float squared_distance(std::span<const float> a, std::span<const float> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy(float alpha, std::span<const float> x, std::span<float> y);

/// Row-major C(m x n) = beta * C + A(m x k) * B(k x n). beta == 0 ignores prior C contents.
void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
          std::size_t ldb, double beta, double* c, std::size_t ldc);
void gemm(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda, const float* b,
          std::size_t ldb, float beta, float* c, std::size_t ldc);

/// C(m x n) = beta * C + A^T * B with A stored k x m.
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
             std::size_t ldb, double beta, double* c, std::size_t ldc);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda, const float* b,
             std::size_t ldb, float beta, float* c, std::size_t ldc);

/// C(m x n) = beta * C + A * B^T with B stored n x k.
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
             std::size_t ldb, double beta, double* c, std::size_t ldc);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const float* a, std::size_t lda, const float* b,
             std::size_t ldb, float beta, float* c, std::size_t ldc);

}  // namespace vizrec::kernels

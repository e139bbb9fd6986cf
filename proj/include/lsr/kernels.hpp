#pragma once
// Dense float64 kernels used by the network forward/backward passes.
//
// Every kernel has a portable scalar reference implementation in
// `lsr::kernels::scalar`. On x86-64 an AVX2+FMA variant lives in
// `lsr::kernels::avx2`; the unqualified entry points dispatch to the best
// variant the running CPU supports. The two variants agree up to
// floating-point reassociation (see tests/test_kernels.cpp).
//
// Matrices are row-major, `rows x cols`, stored contiguously.

#include <cstddef>
#include <span>
#include <string_view>

namespace lsr::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU (and compiled into this build).
Isa detected_isa() noexcept;

/// Variant currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Pin the dispatching entry points to `isa`. Throws DomainError when the
/// CPU or build does not support it. Not thread-safe; intended for tests
/// and benchmarks.
void force_isa(Isa isa);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// y = W x + b, W is rows x cols
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> b,
          std::span<double> y);

/// out = W^T g, W is rows x cols, g has `rows` entries, out has `cols`
void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> out);

/// W += alpha * g x^T, W is g.size() x x.size()
void ger(double alpha, std::span<const double> g, std::span<const double> x,
         std::span<double> w);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> b,
          std::span<double> y);
void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> out);
void ger(double alpha, std::span<const double> g, std::span<const double> x,
         std::span<double> w);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define LSR_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> b,
          std::span<double> y);
void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> out);
void ger(double alpha, std::span<const double> g, std::span<const double> x,
         std::span<double> w);
}  // namespace avx2
#else
#define LSR_HAVE_AVX2_KERNELS 0
#endif

}  // namespace lsr::kernels

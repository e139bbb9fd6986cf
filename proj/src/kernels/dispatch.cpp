#include "lsr/error.hpp"
#include "lsr/kernels.hpp"

#include <cstdlib>
#include <string>
#include <string_view>

namespace lsr::kernels {

namespace {

struct Table {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*gemv)(std::span<const double>, std::size_t, std::size_t,
               std::span<const double>, std::span<const double>,
               std::span<double>);
  void (*gemv_t)(std::span<const double>, std::size_t, std::size_t,
                 std::span<const double>, std::span<double>);
  void (*ger)(double, std::span<const double>, std::span<const double>,
              std::span<double>);
};

constexpr Table kScalar{Isa::scalar, scalar::dot, scalar::axpy, scalar::gemv,
                        scalar::gemv_t, scalar::ger};
#if LSR_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Isa::avx2, avx2::dot, avx2::axpy, avx2::gemv,
                      avx2::gemv_t, avx2::ger};
#endif

bool cpu_has_avx2() noexcept {
#if LSR_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& table_for(Isa isa) {
#if LSR_HAVE_AVX2_KERNELS
  if (isa == Isa::avx2) return kAvx2;
#endif
  (void)isa;
  return kScalar;
}

// LSR_KERNELS=scalar pins the reference path for a whole process.
Isa initial_isa() noexcept {
  if (const char* env = std::getenv("LSR_KERNELS"); env != nullptr) {
    if (std::string_view(env) == "scalar") return Isa::scalar;
  }
  return detected_isa();
}

const Table* g_active = &table_for(initial_isa());

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() noexcept { return g_active->isa; }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw DomainError("kernel variant avx2 is not supported on this CPU");
  }
  g_active = &table_for(isa);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return g_active->dot(a, b);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  g_active->axpy(alpha, x, y);
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> b,
          std::span<double> y) {
  g_active->gemv(w, rows, cols, x, b, y);
}

void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> out) {
  g_active->gemv_t(w, rows, cols, g, out);
}

void ger(double alpha, std::span<const double> g, std::span<const double> x,
         std::span<double> w) {
  g_active->ger(alpha, g, x, w);
}

}  // namespace lsr::kernels

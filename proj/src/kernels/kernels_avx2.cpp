// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after the dispatcher has checked CPU support.

#include "lsr/kernels.hpp"

#include <immintrin.h>

namespace lsr::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i));
    _mm256_storeu_pd(py + i, vy);
  }
  for (; i < n; ++i) py[i] += alpha * px[i];
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<const double> b,
          std::span<double> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = b[r] + dot(w.subspan(r * cols, cols), x);
  }
}

void gemv_t(std::span<const double> w, std::size_t rows, std::size_t cols,
            std::span<const double> g, std::span<double> out) {
  for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (g[r] == 0.0) continue;
    axpy(g[r], w.subspan(r * cols, cols), out);
  }
}

void ger(double alpha, std::span<const double> g, std::span<const double> x,
         std::span<double> w) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < g.size(); ++r) {
    const double s = alpha * g[r];
    if (s == 0.0) continue;
    axpy(s, x, w.subspan(r * cols, cols));
  }
}

}  // namespace lsr::kernels::avx2

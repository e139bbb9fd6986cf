#include "lsr/kernels.hpp"

namespace lsr::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
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

}  // namespace lsr::kernels::scalar

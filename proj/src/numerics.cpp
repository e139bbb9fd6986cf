#include "lsr/numerics.hpp"

#include "lsr/error.hpp"
#include "lsr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace lsr {

double log_sum_exp(std::span<const double> z) {
  if (z.empty()) throw ShapeError("log_sum_exp of an empty vector");
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

void softmax_into(std::span<const double> z, std::span<double> out) {
  if (z.empty()) throw ShapeError("softmax of an empty vector");
  if (out.size() != z.size()) throw ShapeError("softmax output size mismatch");
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = std::exp(z[k] - m);
    s += out[k];
  }
  for (double& v : out) v /= s;
}

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> out(z.size());
  softmax_into(z, out);
  return out;
}

std::vector<double> log_softmax(std::span<const double> z) {
  const double lse = log_sum_exp(z);
  std::vector<double> out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k] - lse;
  return out;
}

std::size_t argmax(std::span<const double> v) {
  if (v.empty()) throw ShapeError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

std::size_t argmin(std::span<const double> v) {
  if (v.empty()) throw ShapeError("argmin of an empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] < v[best]) best = k;
  }
  return best;
}

std::size_t argmax_excluding(std::span<const double> v, std::size_t skip) {
  if (v.size() < 2) throw ShapeError("argmax_excluding needs at least two entries");
  std::size_t best = skip == 0 ? 1 : 0;
  for (std::size_t k = best + 1; k < v.size(); ++k) {
    if (k != skip && v[k] > v[best]) best = k;
  }
  return best;
}

double linf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Tensor

std::size_t shape_product(std::span<const std::size_t> shape) noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), values_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_product(shape_) != values_.size()) {
    throw ShapeError("tensor shape product " + std::to_string(shape_product(shape_)) +
                     " does not match value count " + std::to_string(values_.size()));
  }
}

bool Tensor::all_finite() const noexcept { return lsr::all_finite(values_); }

void Tensor::fill(double v) noexcept { std::fill(values_.begin(), values_.end(), v); }

}  // namespace lsr

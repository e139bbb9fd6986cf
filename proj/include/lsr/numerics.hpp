#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lsr {

/// log(sum_k exp(z_k)), max-shifted.
double log_sum_exp(std::span<const double> z);

/// Max-shifted softmax. Output sums to 1 and every component is > 0 for
/// finite input of moderate spread.
std::vector<double> softmax(std::span<const double> z);
void softmax_into(std::span<const double> z, std::span<double> out);

std::vector<double> log_softmax(std::span<const double> z);

// Ties resolve to the lowest index.
std::size_t argmax(std::span<const double> v);
std::size_t argmin(std::span<const double> v);
/// argmax over all indices except `skip`; requires v.size() >= 2.
std::size_t argmax_excluding(std::span<const double> v, std::size_t skip);

double linf_norm(std::span<const double> v);
double l1_norm(std::span<const double> v);

/// -1, 0 or +1.
inline double sign(double v) noexcept { return (v > 0.0) - (v < 0.0); }

bool all_finite(std::span<const double> v) noexcept;

/// SplitMix64 finalizer; used to derive independent per-task seeds from a
/// base seed and an index.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace lsr

#pragma once

#include "lsr/fading_gaussian.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lsr {

/// n examples of d features with labels in [0, class_count).
class Dataset {
 public:
  Dataset() = default;
  /// Throws ShapeError when inputs.size() != labels.size() * dim and
  /// DomainError for labels outside [0, class_count).
  Dataset(std::size_t dim, std::vector<double> inputs, std::vector<std::size_t> labels,
          std::size_t class_count);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t class_count() const noexcept { return class_count_; }

  std::span<const double> row(std::size_t i) const { return {inputs_.data() + i * dim_, dim_}; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  std::span<const double> inputs() const noexcept { return inputs_; }
  std::span<const std::size_t> labels() const noexcept { return labels_; }

  std::vector<std::size_t> class_counts() const;

  /// Rows `indices` in that order.
  Dataset select(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> inputs_;
  std::vector<std::size_t> labels_;
  std::size_t class_count_ = 0;
};

inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;

struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

/// Parse IDX image / label files from memory. Errors name the byte offset.
IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

/// Pixels scaled to [0, 1] by dividing by 255; K = 10. Throws ParseError
/// for malformed files or mismatched counts.
Dataset load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Bytes -> Dataset, the in-memory core of load_mnist_idx.
Dataset mnist_from_idx(std::span<const std::uint8_t> image_bytes,
                       std::span<const std::uint8_t> label_bytes);

/// Two interleaved unit half-circles: class 0 on (cos t, sin t), class 1 on
/// (1 - cos t, 0.5 - sin t), t evenly spaced over [0, pi], plus isotropic
/// Gaussian noise; ceil(n/2) points in class 0. Rows are shuffled.
Dataset two_moons(std::size_t n, double noise_std, std::uint64_t seed);

struct Subset {
  Dataset data;
  std::vector<std::size_t> indices;  // rows of the source, in output order
};

/// Uniform sample of n rows without replacement. Throws DomainError for
/// n == 0 or n > ds.size().
Subset subset(const Dataset& ds, std::size_t n, std::uint64_t seed);

/// Labels -1 -> 0, +1 -> 1.
Dataset to_dataset(const gaussian::Sample& s);

}  // namespace lsr

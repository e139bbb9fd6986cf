#include "lsr/data.hpp"

#include "lsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace lsr {

Dataset::Dataset(std::size_t dim, std::vector<double> inputs, std::vector<std::size_t> labels,
                 std::size_t class_count)
    : dim_(dim), inputs_(std::move(inputs)), labels_(std::move(labels)), class_count_(class_count) {
  if (inputs_.size() != labels_.size() * dim_) {
    throw ShapeError("dataset has " + std::to_string(inputs_.size()) + " values for " +
                     std::to_string(labels_.size()) + " rows of width " + std::to_string(dim_));
  }
  for (std::size_t y : labels_) {
    if (y >= class_count_) throw DomainError("dataset label " + std::to_string(y) + " out of range");
  }
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_count_, 0);
  for (std::size_t y : labels_) ++counts[y];
  return counts;
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
  std::vector<double> x;
  x.reserve(indices.size() * dim_);
  std::vector<std::size_t> y;
  y.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw DomainError("row index out of range");
    const auto r = row(i);
    x.insert(x.end(), r.begin(), r.end());
    y.push_back(labels_[i]);
  }
  return Dataset(dim_, std::move(x), std::move(y), class_count_);
}

// IDX

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset,
                        const char* what) {
  if (offset + 4 > bytes.size()) {
    throw ParseError(std::string("truncated IDX header: ") + what + " at offset " +
                     std::to_string(offset));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex(std::uint32_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 28; shift >= 0; shift -= 4) s += digits[(v >> shift) & 0xF];
  return s;
}

}  // namespace

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0, "magic");
  if (magic != kIdxImageMagic) {
    throw ParseError("bad IDX image magic " + hex(magic) + " at offset 0");
  }
  IdxImages img;
  img.count = read_be32(bytes, 4, "image count");
  img.rows = read_be32(bytes, 8, "row count");
  img.cols = read_be32(bytes, 12, "column count");
  const std::size_t payload = img.count * img.rows * img.cols;
  if (bytes.size() - 16 < payload) {
    throw ParseError("truncated IDX image payload: expected " + std::to_string(payload) +
                     " bytes from offset 16, found " + std::to_string(bytes.size() - 16));
  }
  if (bytes.size() - 16 > payload) {
    throw ParseError("trailing bytes after IDX image payload at offset " +
                     std::to_string(16 + payload));
  }
  img.pixels.assign(bytes.begin() + 16, bytes.end());
  return img;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0, "magic");
  if (magic != kIdxLabelMagic) {
    throw ParseError("bad IDX label magic " + hex(magic) + " at offset 0");
  }
  const std::size_t count = read_be32(bytes, 4, "label count");
  if (bytes.size() - 8 < count) {
    throw ParseError("truncated IDX label payload: expected " + std::to_string(count) +
                     " bytes from offset 8, found " + std::to_string(bytes.size() - 8));
  }
  if (bytes.size() - 8 > count) {
    throw ParseError("trailing bytes after IDX label payload at offset " +
                     std::to_string(8 + count));
  }
  return {bytes.begin() + 8, bytes.end()};
}

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images) {
  if (images.pixels.size() != images.count * images.rows * images.cols) {
    throw ShapeError("IDX image payload does not match its header");
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.pixels.size());
  write_be32(out, kIdxImageMagic);
  write_be32(out, static_cast<std::uint32_t>(images.count));
  write_be32(out, static_cast<std::uint32_t>(images.rows));
  write_be32(out, static_cast<std::uint32_t>(images.cols));
  out.insert(out.end(), images.pixels.begin(), images.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  write_be32(out, kIdxLabelMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Dataset mnist_from_idx(std::span<const std::uint8_t> image_bytes,
                       std::span<const std::uint8_t> label_bytes) {
  const IdxImages img = parse_idx_images(image_bytes);
  const std::vector<std::uint8_t> labels = parse_idx_labels(label_bytes);
  if (img.count != labels.size()) {
    throw ParseError("image count " + std::to_string(img.count) + " (offset 4) does not match label count " +
                     std::to_string(labels.size()) + " (offset 4)");
  }
  constexpr std::size_t kClasses = 10;
  std::vector<double> x(img.pixels.size());
  std::transform(img.pixels.begin(), img.pixels.end(), x.begin(),
                 [](std::uint8_t b) { return static_cast<double>(b) / 255.0; });
  std::vector<std::size_t> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= kClasses) {
      throw ParseError("label " + std::to_string(labels[i]) + " at offset " +
                       std::to_string(8 + i) + " is not a digit");
    }
    y[i] = labels[i];
  }
  return Dataset(img.rows * img.cols, std::move(x), std::move(y), kClasses);
}

Dataset load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  try {
    return mnist_from_idx(read_file_bytes(images), read_file_bytes(labels));
  } catch (const ParseError& e) {
    throw ParseError(images.filename().string() + "/" + labels.filename().string() + ": " +
                     e.what());
  }
}

// Synthetic

Dataset two_moons(std::size_t n, double noise_std, std::uint64_t seed) {
  if (n < 2) throw DomainError("two_moons needs n >= 2");
  if (!(noise_std >= 0.0)) throw DomainError("noise_std must be >= 0");
  const std::size_t n_upper = (n + 1) / 2;
  const std::size_t n_lower = n / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  auto angle = [](std::size_t i, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1)
                     : 0.0;
  };
  std::vector<double> x;
  x.reserve(2 * n);
  std::vector<std::size_t> y;
  y.reserve(n);
  for (std::size_t i = 0; i < n_upper; ++i) {
    const double t = angle(i, n_upper);
    x.push_back(std::cos(t));
    x.push_back(std::sin(t));
    y.push_back(0);
  }
  for (std::size_t i = 0; i < n_lower; ++i) {
    const double t = angle(i, n_lower);
    x.push_back(1.0 - std::cos(t));
    x.push_back(0.5 - std::sin(t));
    y.push_back(1);
  }
  if (noise_std > 0.0) {
    for (double& v : x) v += noise_std * noise(rng);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return Dataset(2, std::move(x), std::move(y), 2).select(order);
}

Subset subset(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("subset size must be >= 1");
  if (n > ds.size()) {
    throw DomainError("subset of " + std::to_string(n) + " rows requested from " +
                      std::to_string(ds.size()));
  }
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first n slots form the sample.
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(n);
  Subset out{ds.select(order), std::move(order)};
  return out;
}

Dataset to_dataset(const gaussian::Sample& s) {
  std::vector<std::size_t> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) y[i] = s.y[i] > 0 ? 1 : 0;
  return Dataset(s.dim, s.x, std::move(y), 2);
}

}  // namespace lsr

#include "lsr/data.hpp"

#include "lsr/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

using namespace lsr;

namespace {

const std::filesystem::path kFixture = std::filesystem::path(LSR_FIXTURES) / "mnist100";

IdxImages random_images(std::size_t count, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IdxImages img{count, rows, cols, std::vector<std::uint8_t>(count * rows * cols)};
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
  return img;
}

bool message_has(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const ParseError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST(Idx, RoundTrip) {
  const IdxImages img = random_images(7, 3, 5, 1);
  const auto bytes = encode_idx_images(img);
  ASSERT_EQ(bytes.size(), 16u + 7 * 15);
  EXPECT_EQ(bytes[2], 0x08);
  EXPECT_EQ(bytes[3], 0x03);
  const IdxImages back = parse_idx_images(bytes);
  EXPECT_EQ(back.count, 7u);
  EXPECT_EQ(back.rows, 3u);
  EXPECT_EQ(back.cols, 5u);
  EXPECT_EQ(back.pixels, img.pixels);

  const std::vector<std::uint8_t> labels{0, 9, 3, 3, 1, 2, 8};
  const auto lb = encode_idx_labels(labels);
  EXPECT_EQ(lb[3], 0x01);
  EXPECT_EQ(parse_idx_labels(lb), labels);

  const Dataset ds = mnist_from_idx(bytes, lb);
  EXPECT_EQ(ds.size(), 7u);
  EXPECT_EQ(ds.dim(), 15u);
  EXPECT_EQ(ds.class_count(), 10u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(ds.label(i), labels[i]);
    for (std::size_t j = 0; j < 15; ++j) EXPECT_EQ(ds.row(i)[j], img.pixels[i * 15 + j] / 255.0);
  }
}

TEST(Idx, PixelScaling) {
  IdxImages img{1, 1, 3, {0, 255, 51}};
  const std::vector<std::uint8_t> labels{4};
  const Dataset ds = mnist_from_idx(encode_idx_images(img), encode_idx_labels(labels));
  EXPECT_EQ(ds.row(0)[0], 0.0);
  EXPECT_EQ(ds.row(0)[1], 1.0);
  EXPECT_EQ(ds.row(0)[2], 0.2);
}

TEST(Idx, Errors) {
  const auto good = encode_idx_images(random_images(2, 2, 2, 2));
  auto bad_magic = good;
  bad_magic[3] = 0x01;
  EXPECT_TRUE(message_has([&] { parse_idx_images(bad_magic); }, "offset 0"));
  EXPECT_TRUE(message_has([&] { parse_idx_labels(good); }, "offset 0"));
  EXPECT_TRUE(message_has([&] { parse_idx_images(std::span(good).first(10)); }, "offset 8"));
  EXPECT_TRUE(message_has([&] { parse_idx_images(std::span(good).first(good.size() - 1)); }, "offset 16"));
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(parse_idx_images(trailing), ParseError);

  const std::vector<std::uint8_t> three{1, 2, 3};
  EXPECT_TRUE(message_has([&] { mnist_from_idx(good, encode_idx_labels(three)); }, "does not match"));
  const std::vector<std::uint8_t> ten{1, 10};
  EXPECT_THROW(mnist_from_idx(good, encode_idx_labels(ten)), ParseError);
  EXPECT_THROW(load_mnist_idx(kFixture / "missing", kFixture / "missing"), ParseError);
}

TEST(Idx, Fixture) {
  const Dataset train = load_mnist_idx(kFixture / "train-images-idx3-ubyte", kFixture / "train-labels-idx1-ubyte");
  const Dataset test = load_mnist_idx(kFixture / "t10k-images-idx3-ubyte", kFixture / "t10k-labels-idx1-ubyte");
  EXPECT_EQ(train.size(), 100u);
  EXPECT_EQ(test.size(), 100u);
  EXPECT_EQ(train.dim(), 784u);
  const std::vector<std::size_t> first{5, 0, 4, 1, 9, 2, 1, 3, 1, 4};
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(train.label(i), first[i]);
  double sum = 0.0;
  for (double v : train.row(0)) sum += v * 255.0;
  EXPECT_NEAR(sum, 27525.0, 1e-7);
  for (double v : train.inputs()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(DatasetType, Validation) {
  EXPECT_THROW(Dataset(2, {1.0, 2.0, 3.0}, {0, 1}, 2), ShapeError);
  EXPECT_THROW(Dataset(1, {1.0, 2.0}, {0, 2}, 2), DomainError);
  const Dataset d(1, {1.0, 2.0, 3.0}, {0, 1, 1}, 3);
  EXPECT_EQ(d.class_counts(), (std::vector<std::size_t>{1, 2, 0}));
  const std::vector<std::size_t> idx{2, 0};
  const Dataset s = d.select(idx);
  EXPECT_EQ(s.row(0)[0], 3.0);
  EXPECT_EQ(s.label(1), 0u);
}

TEST(Moons, NoiselessPointsOnCircles) {
  const Dataset ds = two_moons(101, 0.0, 3);
  EXPECT_EQ(ds.size(), 101u);
  EXPECT_EQ(ds.class_count(), 2u);
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{51, 50}));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double x = ds.row(i)[0], y = ds.row(i)[1];
    if (ds.label(i) == 0) {
      EXPECT_NEAR(std::hypot(x, y), 1.0, 1e-12);
      EXPECT_GE(y, -1e-12);
    } else {
      EXPECT_NEAR(std::hypot(x - 1.0, y - 0.5), 1.0, 1e-12);
      EXPECT_LE(y, 0.5 + 1e-12);
    }
  }
}

TEST(Moons, BalanceRepeatabilityAndNoise) {
  for (std::size_t n : {2u, 3u, 1000u, 1001u}) {
    const auto c = two_moons(n, 0.1, 4).class_counts();
    EXPECT_EQ(c[0], (n + 1) / 2);
    EXPECT_EQ(c[1], n / 2);
  }
  EXPECT_EQ(two_moons(500, 0.2, 5), two_moons(500, 0.2, 5));
  EXPECT_NE(two_moons(500, 0.2, 5), two_moons(500, 0.2, 6));
  // Radial residual of class 0 has variance about noise^2 for small noise.
  const Dataset ds = two_moons(20000, 0.01, 7);
  double ss = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.label(i) != 0) continue;
    const double r = std::hypot(ds.row(i)[0], ds.row(i)[1]) - 1.0;
    ss += r * r;
    ++m;
  }
  EXPECT_NEAR(std::sqrt(ss / m), 0.01, 0.001);
  EXPECT_THROW(two_moons(1, 0.0, 1), DomainError);
}

TEST(Subset, Properties) {
  const Dataset ds = two_moons(50, 0.1, 8);
  const Subset all = subset(ds, 50, 9);
  std::vector<std::size_t> sorted = all.indices;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(50);
  std::iota(iota.begin(), iota.end(), 0);
  EXPECT_EQ(sorted, iota);
  const Subset a = subset(ds, 20, 10);
  EXPECT_EQ(a.indices, subset(ds, 20, 10).indices);
  EXPECT_EQ(std::set<std::size_t>(a.indices.begin(), a.indices.end()).size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(a.data.label(i), ds.label(a.indices[i]));
    EXPECT_EQ(a.data.row(i)[0], ds.row(a.indices[i])[0]);
  }
  EXPECT_THROW(subset(ds, 0, 1), DomainError);
  EXPECT_THROW(subset(ds, 51, 1), DomainError);
}

TEST(Subset, RoughlyUniform) {
  const Dataset ds(1, std::vector<double>(10, 0.0), std::vector<std::size_t>(10, 0), 1);
  std::vector<int> hits(10, 0);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    for (std::size_t i : subset(ds, 3, s).indices) ++hits[i];
  }
  // Expected 600 each; binomial sd ~ 20.5.
  for (int h : hits) EXPECT_NEAR(h, 600, 90);
}

TEST(GaussianBridge, Labels) {
  const auto s = gaussian::sample(gaussian::fading_schedule(3), 100, 11);
  const Dataset ds = to_dataset(s);
  EXPECT_EQ(ds.class_count(), 2u);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(ds.label(i), s.y[i] > 0 ? 1u : 0u);
    EXPECT_EQ(ds.row(i)[2], s.row(i)[2]);
  }
}

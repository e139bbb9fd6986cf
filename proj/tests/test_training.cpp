#include "lsr/training.hpp"

#include "lsr/error.hpp"
#include "lsr/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace lsr;

namespace {

DenseNetwork mlp(std::size_t in, std::size_t classes, std::vector<std::size_t> hidden, std::uint64_t seed) {
  std::vector<std::size_t> widths{in};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(classes);
  return DenseNetwork::initialized(widths, seed);
}

// Separable 2-D blobs in [0, 1]^2: class 0 left, class 1 right.
Dataset separable(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 0.4);
  std::vector<double> x;
  std::vector<std::size_t> y;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % 2;
    x.push_back(u(rng) + 0.6 * static_cast<double>(c));
    x.push_back(u(rng) + 0.3);
    y.push_back(c);
  }
  return Dataset(2, std::move(x), std::move(y), 2);
}

TrainConfig base_config(double lr, int epochs) {
  TrainConfig cfg;
  cfg.lr = lr;
  cfg.epochs = epochs;
  cfg.batch_size = 16;
  cfg.seed = 5;
  cfg.clip_min = -1e9;
  cfg.clip_max = 1e9;
  return cfg;
}

}  // namespace

TEST(TrainConfigValidation, Rejects) {
  TrainConfig cfg;
  cfg.lr = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = TrainConfig{};
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = TrainConfig{};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = TrainConfig{};
  cfg.smoothing = SmoothingConfig{SmoothingMethod::sls, 1.5};
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = TrainConfig{};
  cfg.adversarial = PgdTraining{-0.1, 0.1, 3};
  EXPECT_THROW(cfg.validate(), DomainError);
  const PgdTraining d;
  EXPECT_EQ(d.epsilon, 0.25);
  EXPECT_EQ(d.step, 0.1);
  EXPECT_EQ(d.iterations, 3);
}

TEST(TrainLs, AlphaZeroEqualsNaturalTrainingBitwise) {
  const Dataset data = two_moons(200, 0.1, 1);
  const DenseNetwork init = mlp(2, 2, {8}, 2);
  const DenseNetwork natural = train_ls(init, data, base_config(0.1, 3));
  for (auto m : {SmoothingMethod::sls, SmoothingMethod::als, SmoothingMethod::bls, SmoothingMethod::sbls}) {
    TrainConfig cfg = base_config(0.1, 3);
    cfg.smoothing = SmoothingConfig{m, 0.0};
    EXPECT_TRUE(train_ls(init, data, cfg) == natural) << method_name(m);
  }
  EXPECT_FALSE(natural == init);
}

TEST(TrainLs, Deterministic) {
  const Dataset data = two_moons(200, 0.1, 3);
  TrainConfig cfg = base_config(0.1, 2);
  cfg.smoothing = SmoothingConfig{SmoothingMethod::als, 0.1};
  const DenseNetwork a = train_ls(mlp(2, 2, {8}, 4), data, cfg);
  EXPECT_TRUE(a == train_ls(mlp(2, 2, {8}, 4), data, cfg));
  cfg.seed = 6;
  EXPECT_FALSE(a == train_ls(mlp(2, 2, {8}, 4), data, cfg));
}

TEST(TrainLs, SlsLossBoundedByLabelEntropy) {
  const Dataset data = two_moons(400, 0.05, 7);
  TrainConfig cfg = base_config(0.5, 20);
  cfg.smoothing = SmoothingConfig{SmoothingMethod::sls, 0.1};
  TrainStats stats;
  train_ls(mlp(2, 2, {16}, 8), data, cfg, &stats);
  ASSERT_EQ(stats.epoch_loss.size(), 20u);
  // With K = 2 every target is (0.9, 0.1) up to order.
  const double h = -(0.9 * std::log(0.9) + 0.1 * std::log(0.1));
  EXPECT_NEAR(h, 0.325, 1e-3);
  for (double l : stats.epoch_loss) EXPECT_GE(l, h - 1e-12);
  EXPECT_LT(stats.epoch_loss.back(), stats.epoch_loss.front());
  EXPECT_GT(stats.seconds, 0.0);
}

TEST(TrainLs, AlsSqueezesLogitsOnSeparableData) {
  const Dataset data = separable(200, 11);
  const DenseNetwork init = mlp(2, 2, {}, 12);
  const DenseNetwork natural = train_ls(init, data, base_config(1.0, 50));
  TrainConfig cfg = base_config(1.0, 50);
  cfg.smoothing = SmoothingConfig{SmoothingMethod::als, 0.1};
  const DenseNetwork als = train_ls(init, data, cfg);
  EXPECT_EQ(accuracy(natural, data), 1.0);
  EXPECT_LT(mean_logit_gap(als, data), mean_logit_gap(natural, data));
}

TEST(TrainLs, MoonsLogitGapDecreasesWithAlpha) {
  const Dataset train = two_moons(1000, 0.1, 13);
  const Dataset held = two_moons(1000, 0.1, 14);
  const DenseNetwork init = mlp(2, 2, {32, 32}, 15);
  double previous = INFINITY;
  for (double alpha : {0.0, 0.1, 0.4}) {
    TrainConfig cfg = base_config(0.1, 30);
    cfg.smoothing = SmoothingConfig{SmoothingMethod::als, alpha};
    const double gap = mean_logit_gap(train_ls(init, train, cfg), held);
    EXPECT_LT(gap, previous) << "alpha " << alpha;
    previous = gap;
  }
}

TEST(TrainLs, Preconditions) {
  const Dataset data = two_moons(20, 0.1, 16);
  EXPECT_THROW(train_ls(mlp(3, 2, {}, 1), data, base_config(0.1, 1)), ShapeError);
  EXPECT_THROW(train_ls(mlp(2, 3, {}, 1), data, base_config(0.1, 1)), ShapeError);
  EXPECT_THROW(train_ls(mlp(2, 2, {}, 1), Dataset{}, base_config(0.1, 1)), DomainError);
  EXPECT_THROW(train_ls(mlp(2, 2, {8}, 1), data, base_config(1e300, 2)), NumericError);
}

TEST(TrainPgd, ZeroBudgetEqualsNatural) {
  const Dataset data = two_moons(200, 0.1, 17);
  const DenseNetwork init = mlp(2, 2, {8}, 18);
  TrainConfig cfg = base_config(0.1, 3);
  const DenseNetwork natural = train_ls(init, data, cfg);
  cfg.adversarial = PgdTraining{0.0, 0.1, 3};
  EXPECT_TRUE(train_pgd_adversarial(init, data, cfg) == natural);
  cfg.adversarial.reset();
  EXPECT_THROW(train_pgd_adversarial(init, data, cfg), DomainError);
}

TEST(TrainPgd, CostsMoreThanNaturalTraining) {
  const Dataset data = two_moons(1000, 0.1, 19);
  const DenseNetwork init = mlp(2, 2, {32}, 20);
  TrainConfig cfg = base_config(0.1, 10);
  TrainStats natural_stats, pgd_stats;
  train_ls(init, data, cfg, &natural_stats);
  cfg.adversarial = PgdTraining{0.1, 0.05, 3};
  train_pgd_adversarial(init, data, cfg, &pgd_stats);
  EXPECT_GT(pgd_stats.seconds / natural_stats.seconds, 1.5);
}

TEST(Evaluate, BasicProperties) {
  const Dataset train = two_moons(400, 0.1, 21);
  const Dataset test = two_moons(300, 0.1, 22);
  const DenseNetwork net = train_ls(mlp(2, 2, {16}, 23), train, base_config(0.1, 20));
  std::vector<AttackConfig> attacks;
  for (double e : {0.0, 0.1, 0.3}) {
    auto f = AttackConfig::fgsm(e);
    f.clip_min = -1e9;
    f.clip_max = 1e9;
    attacks.push_back(f);
    auto p = AttackConfig::pgd(e, 5, e / 4 + 1e-3, 3);
    p.clip_min = -1e9;
    p.clip_max = 1e9;
    attacks.push_back(p);
  }
  attacks.push_back(AttackConfig::deepfool());
  attacks.back().clip_min = -1e9;
  attacks.back().clip_max = 1e9;
  const EvalReport r = evaluate(net, test, attacks);
  EXPECT_EQ(r.examples, 300u);
  EXPECT_EQ(r.class_count, 2u);
  EXPECT_EQ(r.standard_accuracy, accuracy(net, test));
  EXPECT_EQ(r.accuracy(AttackKind::fgsm, 0.0), r.standard_accuracy);
  EXPECT_EQ(r.accuracy(AttackKind::pgd, 0.0), r.standard_accuracy);
  for (const auto& a : r.adversarial) {
    EXPECT_LE(a.accuracy, r.standard_accuracy);
    EXPECT_GE(a.accuracy, 0.0);
  }
  EXPECT_LE(r.accuracy(AttackKind::fgsm, 0.3), r.accuracy(AttackKind::fgsm, 0.1));
  EXPECT_LE(r.accuracy(AttackKind::deepfool, 0.0), 0.05);
  EXPECT_GT(r.fooling_eps_count, 0u);
  EXPECT_GT(r.mean_min_fooling_eps, 0.0);
  EXPECT_THROW(r.accuracy(AttackKind::bim, 0.1), DomainError);
  EXPECT_TRUE(r.below_chance(0.49));
  EXPECT_FALSE(r.below_chance(0.5));

  EvalOptions limited;
  limited.fooling_eps_limit = 7;
  EXPECT_EQ(evaluate(net, test, {}, limited).fooling_eps_count, 7u);
  limited.fooling_eps = false;
  EXPECT_EQ(evaluate(net, test, {}, limited).fooling_eps_count, 0u);
}

TEST(Evaluate, UntrainedNetworkIsAtChance) {
  // Balanced 4-class data with labels independent of the inputs.
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 4000;
  std::vector<double> x(n * 5);
  for (double& v : x) v = u(rng);
  std::vector<std::size_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = i % 4;
  const Dataset data(5, std::move(x), std::move(y), 4);
  const double acc = accuracy(mlp(5, 4, {16}, 25), data);
  EXPECT_NEAR(acc, 0.25, 3.0 * std::sqrt(0.25 * 0.75 / n));
  EXPECT_THROW(accuracy(mlp(5, 4, {}, 1), Dataset{}), DomainError);
}

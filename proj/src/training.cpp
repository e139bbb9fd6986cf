#include "lsr/training.hpp"

#include "lsr/error.hpp"
#include "lsr/numerics.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace lsr {

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw DomainError("learning rate must be > 0");
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (batch_size < 1) throw DomainError("batch size must be >= 1");
  if (smoothing) smoothing->validate();
  if (adversarial) {
    if (!(adversarial->epsilon >= 0.0)) throw DomainError("PGD training epsilon must be >= 0");
    if (!(adversarial->step > 0.0)) throw DomainError("PGD training step must be > 0");
    if (adversarial->iterations < 1) throw DomainError("PGD training needs >= 1 iteration");
  }
  if (!(clip_min < clip_max)) throw DomainError("clip_min must be below clip_max");
}

namespace {

using Clock = std::chrono::steady_clock;

// Produces the training input for example `row`; identity for LS training.
template <typename Prepare>
DenseNetwork run_sgd(DenseNetwork net, const Dataset& data, const TrainConfig& cfg,
                     TrainStats* stats, Prepare&& prepare) {
  cfg.validate();
  if (data.empty()) throw DomainError("training set is empty");
  if (data.dim() != net.input_dim()) throw ShapeError("dataset width does not match the network");
  if (data.class_count() != net.class_count()) {
    throw ShapeError("dataset class count does not match the network");
  }
  const auto start = Clock::now();
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t classes = net.class_count();
  // SmoothCE with alpha = 0 is plain cross-entropy.
  const SmoothingConfig smoothing = cfg.smoothing.value_or(SmoothingConfig{SmoothingMethod::als, 0.0});
  TrainStats local;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(end - begin);
      GradientBundle grads = GradientBundle::zeros_like(net);
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t row = order[b];
        const std::size_t y = data.label(row);
        const std::vector<double> x = prepare(net, row, y);
        const Tape tape = record_forward(net, x);
        const LabelDistribution q = smoothing.alpha == 0.0
                                        ? LabelDistribution::one_hot(classes, y)
                                        : smooth_labels(smoothing, y, tape.logits());
        epoch_loss += smooth_ce(q, tape.logits());
        const std::vector<double> cot = smooth_ce_gradient(q, tape.logits());
        accumulate_param_grads(net, tape, cot, scale, grads);
      }
      if (!grads.all_finite()) {
        throw NumericError("training diverged in epoch " + std::to_string(epoch));
      }
      sgd_step(net, grads, cfg.lr);
    }
    epoch_loss /= static_cast<double>(data.size());
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("training loss is not finite in epoch " + std::to_string(epoch));
    }
    local.epoch_loss.push_back(epoch_loss);
  }
  local.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (stats) *stats = std::move(local);
  return net;
}

}  // namespace

DenseNetwork train_ls(DenseNetwork net, const Dataset& data, const TrainConfig& cfg,
                      TrainStats* stats) {
  return run_sgd(std::move(net), data, cfg, stats,
                 [&](const DenseNetwork&, std::size_t row, std::size_t) {
                   const auto r = data.row(row);
                   return std::vector<double>(r.begin(), r.end());
                 });
}

DenseNetwork train_pgd_adversarial(DenseNetwork net, const Dataset& data, const TrainConfig& cfg,
                                   TrainStats* stats) {
  if (!cfg.adversarial) throw DomainError("PGD training needs adversarial settings");
  const PgdTraining& adv = *cfg.adversarial;
  AttackConfig attack = AttackConfig::pgd(adv.epsilon, adv.iterations, adv.step);
  attack.clip_min = cfg.clip_min;
  attack.clip_max = cfg.clip_max;
  std::uint64_t counter = 0;
  TrainConfig plain = cfg;
  plain.smoothing.reset();
  attack.seed = mix_seed(cfg.seed, 0xAD7);
  return run_sgd(std::move(net), data, plain, stats,
                 [&](const DenseNetwork& current, std::size_t row, std::size_t y) {
                   return pgd(current, data.row(row), y, attack, counter++).x_adv;
                 });
}

// Evaluation

double EvalReport::accuracy(AttackKind kind, double epsilon) const {
  for (const auto& a : adversarial) {
    if (a.kind == kind && (kind == AttackKind::deepfool || a.epsilon == epsilon)) return a.accuracy;
  }
  throw DomainError("no result for " + std::string(attack_name(kind)) + " at eps " +
                    std::to_string(epsilon));
}

double EvalReport::chance_level() const noexcept {
  return class_count > 0 ? 1.0 / static_cast<double>(class_count) : 0.0;
}

bool EvalReport::below_chance(double acc) const noexcept { return acc < chance_level(); }

double accuracy(const DenseNetwork& net, const Dataset& data) {
  if (data.empty()) throw DomainError("evaluation set is empty");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(net, data.row(i)) == data.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

EvalReport evaluate(const DenseNetwork& net, const Dataset& data,
                    std::span<const AttackConfig> attacks, const EvalOptions& options) {
  if (data.empty()) throw DomainError("evaluation set is empty");
  if (data.dim() != net.input_dim()) throw ShapeError("dataset width does not match the network");
  EvalReport report;
  report.class_count = net.class_count();
  report.examples = data.size();

  std::vector<bool> clean_correct(data.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    clean_correct[i] = predict(net, data.row(i)) == data.label(i);
    correct += clean_correct[i];
  }
  const double n = static_cast<double>(data.size());
  report.standard_accuracy = static_cast<double>(correct) / n;

  for (const AttackConfig& cfg : attacks) {
    cfg.validate();
    std::size_t robust = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!clean_correct[i]) continue;
      const AdversarialExample adv = run_attack(net, data.row(i), data.label(i), cfg, i);
      if (adv.adv_class == data.label(i)) ++robust;
    }
    report.adversarial.push_back({cfg.kind, cfg.epsilon, static_cast<double>(robust) / n});
  }

  if (options.fooling_eps) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!clean_correct[i]) continue;
      if (options.fooling_eps_limit > 0 && count >= options.fooling_eps_limit) break;
      const double e = min_fooling_epsilon(net, data.row(i), data.label(i));
      if (!std::isfinite(e)) continue;
      sum += e;
      ++count;
    }
    report.fooling_eps_count = count;
    report.mean_min_fooling_eps =
        count > 0 ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

double mean_logit_gap(const DenseNetwork& net, const Dataset& data) {
  if (data.empty()) throw DomainError("dataset is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Tape tape = record_forward(net, data.row(i));
    const auto z = tape.logits();
    sum += z[data.label(i)] - z[argmin(z)];
  }
  return sum / static_cast<double>(data.size());
}

}  // namespace lsr

#include "lsr/attacks.hpp"

#include "lsr/error.hpp"
#include "lsr/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace lsr {

std::string_view attack_name(AttackKind k) noexcept {
  switch (k) {
    case AttackKind::fgsm: return "fgsm";
    case AttackKind::bim: return "bim";
    case AttackKind::pgd: return "pgd";
    case AttackKind::deepfool: return "deepfool";
  }
  return "unknown";
}

AttackKind parse_attack(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fgsm") return AttackKind::fgsm;
  if (lower == "bim") return AttackKind::bim;
  if (lower == "pgd") return AttackKind::pgd;
  if (lower == "deepfool") return AttackKind::deepfool;
  throw ParseError("unknown attack '" + std::string(name) + "'");
}

AttackConfig AttackConfig::fgsm(double epsilon) {
  AttackConfig c;
  c.kind = AttackKind::fgsm;
  c.epsilon = epsilon;
  c.step_size = epsilon;
  return c;
}

AttackConfig AttackConfig::bim(double epsilon, int steps, std::optional<double> step_size) {
  AttackConfig c;
  c.kind = AttackKind::bim;
  c.epsilon = epsilon;
  c.steps = steps;
  c.step_size = step_size.value_or(epsilon / 4.0);
  return c;
}

AttackConfig AttackConfig::pgd(double epsilon, int steps, double step_size, std::uint64_t seed) {
  AttackConfig c;
  c.kind = AttackKind::pgd;
  c.epsilon = epsilon;
  c.steps = steps;
  c.step_size = step_size;
  c.seed = seed;
  return c;
}

AttackConfig AttackConfig::deepfool() {
  AttackConfig c;
  c.kind = AttackKind::deepfool;
  c.steps = kDeepFoolMaxIterations;
  return c;
}

void AttackConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("attack epsilon must be >= 0");
  if (steps < 1) throw DomainError("attack steps must be >= 1");
  if (!(clip_min < clip_max)) throw DomainError("clip_min must be below clip_max");
  const bool iterative = kind == AttackKind::bim || kind == AttackKind::pgd;
  // A zero-budget iterative attack is the identity; allow a zero step then.
  if (iterative && epsilon > 0.0 && !(step_size > 0.0)) {
    throw DomainError("iterative attacks need a positive step size");
  }
  if (kind == AttackKind::deepfool && !(overshoot >= 0.0)) {
    throw DomainError("DeepFool overshoot must be >= 0");
  }
}

namespace {

std::vector<double> ce_gradient_at(const DenseNetwork& net, const Tape& tape, std::size_t y) {
  std::vector<double> cot(tape.predictions().begin(), tape.predictions().end());
  cot[y] -= 1.0;
  GradientBundle g = backward(net, tape, cot, {.params = false, .input = true});
  if (!g.input_grad->all_finite()) throw NumericError("non-finite input gradient");
  const auto v = g.input_grad->values();
  return {v.begin(), v.end()};
}

void check_label(const DenseNetwork& net, std::size_t y) {
  if (y >= net.class_count()) throw DomainError("attack label out of range");
}

AdversarialExample finish(const DenseNetwork& net, std::span<const double> x,
                          std::vector<double> x_adv, std::size_t query, int iterations) {
  AdversarialExample out;
  out.delta.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.delta[i] = x_adv[i] - x[i];
  out.adv_class = predict(net, x_adv);
  out.x_adv = std::move(x_adv);
  out.query_class = query;
  out.success = out.adv_class != query;
  out.iterations = iterations;
  return out;
}

// Projected signed-gradient iterations from `start` around the anchor x.
AdversarialExample iterate(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                           const AttackConfig& cfg, std::vector<double> current,
                           std::size_t query) {
  const double eps = cfg.epsilon;
  for (int s = 0; s < cfg.steps; ++s) {
    const Tape tape = record_forward(net, current);
    const std::vector<double> g = ce_gradient_at(net, tape, y);
    for (std::size_t i = 0; i < current.size(); ++i) {
      double v = current[i] + cfg.step_size * sign(g[i]);
      v = std::min(std::max(v, x[i] - eps), x[i] + eps);
      current[i] = std::clamp(v, cfg.clip_min, cfg.clip_max);
    }
  }
  return finish(net, x, std::move(current), query, cfg.steps);
}

}  // namespace

std::vector<double> loss_input_gradient(const DenseNetwork& net, std::span<const double> x,
                                        std::size_t y) {
  check_label(net, y);
  const Tape tape = record_forward(net, x);
  return ce_gradient_at(net, tape, y);
}

AdversarialExample fgsm(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                        const AttackConfig& cfg) {
  cfg.validate();
  check_label(net, y);
  const Tape tape = record_forward(net, x);
  const std::size_t query = argmax(tape.logits());
  const std::vector<double> g = ce_gradient_at(net, tape, y);
  std::vector<double> x_adv(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x_adv[i] = std::clamp(x[i] + cfg.epsilon * sign(g[i]), cfg.clip_min, cfg.clip_max);
  }
  return finish(net, x, std::move(x_adv), query, 1);
}

AdversarialExample bim(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                       const AttackConfig& cfg) {
  cfg.validate();
  check_label(net, y);
  const std::size_t query = predict(net, x);
  return iterate(net, x, y, cfg, std::vector<double>(x.begin(), x.end()), query);
}

AdversarialExample pgd(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                       const AttackConfig& cfg, std::uint64_t example_index) {
  cfg.validate();
  check_label(net, y);
  const std::size_t query = predict(net, x);
  std::vector<double> start(x.begin(), x.end());
  if (cfg.random_start && cfg.epsilon > 0.0) {
    std::mt19937_64 rng(mix_seed(cfg.seed, example_index));
    std::uniform_real_distribution<double> offset(-cfg.epsilon, cfg.epsilon);
    for (std::size_t i = 0; i < start.size(); ++i) {
      start[i] = std::clamp(x[i] + offset(rng), cfg.clip_min, cfg.clip_max);
    }
  }
  return iterate(net, x, y, cfg, std::move(start), query);
}

AdversarialExample deepfool_linf(const DenseNetwork& net, std::span<const double> x,
                                 const AttackConfig& cfg, std::optional<std::size_t> label) {
  cfg.validate();
  const std::size_t classes = net.class_count();
  if (classes < 2) throw DomainError("DeepFool needs at least two classes");
  const std::size_t query = predict(net, x);
  if (label) {
    check_label(net, *label);
    if (*label != query) {
      AdversarialExample out = finish(net, x, std::vector<double>(x.begin(), x.end()), query, 0);
      out.success = true;
      return out;
    }
  }

  const std::size_t d = x.size();
  std::vector<double> r_total(d, 0.0);
  std::vector<double> current(x.begin(), x.end());
  std::size_t current_class = query;
  int it = 0;
  while (current_class == query && it < cfg.steps) {
    const Tape tape = record_forward(net, current);
    const auto z = tape.logits();
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_f = 0.0;
    std::vector<double> best_w;
    for (std::size_t k = 0; k < classes; ++k) {
      if (k == query) continue;
      std::vector<double> cot(classes, 0.0);
      cot[k] = 1.0;
      cot[query] = -1.0;
      GradientBundle g = backward(net, tape, cot, {.params = false, .input = true});
      const auto w = g.input_grad->values();
      const double norm = l1_norm(w);
      if (!(norm > 1e-12)) continue;
      const double f = z[k] - z[query];
      const double ratio = std::abs(f) / norm;
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best_f = f;
        best_w.assign(w.begin(), w.end());
      }
    }
    if (best_w.empty()) {
      throw ConvergenceError("DeepFool: every logit-difference gradient vanished");
    }
    const double scale = std::abs(best_f) / l1_norm(best_w);
    for (std::size_t i = 0; i < d; ++i) r_total[i] += scale * sign(best_w[i]);
    for (std::size_t i = 0; i < d; ++i) {
      current[i] = std::clamp(x[i] + (1.0 + cfg.overshoot) * r_total[i], cfg.clip_min,
                              cfg.clip_max);
    }
    current_class = predict(net, current);
    ++it;
  }
  return finish(net, x, std::move(current), query, it);
}

AdversarialExample run_attack(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                              const AttackConfig& cfg, std::uint64_t example_index) {
  switch (cfg.kind) {
    case AttackKind::fgsm: return fgsm(net, x, y, cfg);
    case AttackKind::bim: return bim(net, x, y, cfg);
    case AttackKind::pgd: return pgd(net, x, y, cfg, example_index);
    case AttackKind::deepfool: return deepfool_linf(net, x, cfg, y);
  }
  throw DomainError("unknown attack kind");
}

double min_fooling_epsilon(const DenseNetwork& net, std::span<const double> x, std::size_t y) {
  check_label(net, y);
  const std::size_t classes = net.class_count();
  const Tape tape = record_forward(net, x);
  double widest = 0.0;
  for (std::size_t j = 0; j < classes; ++j) {
    if (j == y) continue;
    std::vector<double> cot(classes, 0.0);
    cot[y] = 1.0;
    cot[j] = -1.0;
    GradientBundle g = backward(net, tape, cot, {.params = false, .input = true});
    widest = std::max(widest, l1_norm(g.input_grad->values()));
  }
  return widest > 0.0 ? 1.0 / widest : std::numeric_limits<double>::infinity();
}

}  // namespace lsr

#include "lsr/smoothing.hpp"

#include "lsr/error.hpp"
#include "lsr/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace lsr {

std::string_view method_name(SmoothingMethod m) noexcept {
  switch (m) {
    case SmoothingMethod::sls: return "SLS";
    case SmoothingMethod::als: return "ALS";
    case SmoothingMethod::bls: return "BLS";
    case SmoothingMethod::sbls: return "SBLS";
  }
  return "unknown";
}

SmoothingMethod parse_method(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "SLS") return SmoothingMethod::sls;
  if (upper == "ALS") return SmoothingMethod::als;
  if (upper == "BLS") return SmoothingMethod::bls;
  if (upper == "SBLS") return SmoothingMethod::sbls;
  throw ParseError("unknown smoothing method '" + std::string(name) + "'");
}

void SmoothingConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("smoothing alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
}

LabelDistribution::LabelDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("label distribution needs at least one class");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("label weights must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("label weights sum to " + std::to_string(sum) + ", not 1");
  }
}

LabelDistribution LabelDistribution::one_hot(std::size_t classes, std::size_t label) {
  if (label >= classes) throw DomainError("label out of range");
  std::vector<double> w(classes, 0.0);
  w[label] = 1.0;
  return LabelDistribution(std::move(w));
}

double tv_distance(const LabelDistribution& a, const LabelDistribution& b) {
  if (a.size() != b.size()) throw ShapeError("tv_distance: class counts differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return 0.5 * s;
}

namespace {

void check_label(std::size_t y, std::size_t classes) {
  if (classes < 2) throw DomainError("smoothing needs at least two classes");
  if (y >= classes) {
    throw DomainError("label " + std::to_string(y) + " out of range for " +
                      std::to_string(classes) + " classes");
  }
}

// Soft-min over k != y: exp(-z_k / T) normalised, max-shifted.
std::vector<double> boltzmann_wrong_classes(std::size_t y, std::span<const double> z,
                                            double temperature) {
  const double t = std::max(temperature, kMinTemperature);
  double top = -INFINITY;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k != y) top = std::max(top, -z[k] / t);
  }
  std::vector<double> w(z.size(), 0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k == y) continue;
    w[k] = std::exp(-z[k] / t - top);
    sum += w[k];
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

LabelDistribution redistribution(SmoothingMethod method, double temperature, std::size_t y,
                                 std::span<const double> logits) {
  const std::size_t classes = logits.size();
  check_label(y, classes);
  if (!all_finite(logits)) throw NumericError("smoothing received non-finite logits");
  std::vector<double> q(classes, 0.0);
  switch (method) {
    case SmoothingMethod::sls: {
      const double share = 1.0 / static_cast<double>(classes - 1);
      for (std::size_t k = 0; k < classes; ++k) {
        if (k != y) q[k] = share;
      }
      break;
    }
    case SmoothingMethod::als:
      q[argmin(logits)] = 1.0;
      break;
    case SmoothingMethod::bls:
      q = boltzmann_wrong_classes(y, logits, temperature);
      break;
    case SmoothingMethod::sbls:
      q[argmax_excluding(logits, y)] = 1.0;
      break;
  }
  return LabelDistribution(std::move(q));
}

LabelDistribution smooth_labels(const SmoothingConfig& cfg, std::size_t y,
                                std::span<const double> logits) {
  cfg.validate();
  const LabelDistribution q_prime = redistribution(cfg.method, cfg.temperature, y, logits);
  std::vector<double> q(logits.size());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = cfg.alpha * q_prime[k];
  q[y] += 1.0 - cfg.alpha;
  return LabelDistribution(std::move(q));
}

double smooth_ce(const LabelDistribution& q, std::span<const double> logits) {
  if (q.size() != logits.size()) throw ShapeError("smooth_ce: label and logit lengths differ");
  const double lse = log_sum_exp(logits);
  double loss = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] != 0.0) loss -= q[k] * (logits[k] - lse);
  }
  return loss;
}

double cross_entropy(std::size_t y, std::span<const double> logits) {
  if (y >= logits.size()) throw DomainError("label out of range");
  return log_sum_exp(logits) - logits[y];
}

std::vector<double> smooth_ce_gradient(const LabelDistribution& q,
                                       std::span<const double> logits) {
  if (q.size() != logits.size()) throw ShapeError("smooth_ce_gradient: length mismatch");
  std::vector<double> g = softmax(logits);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] -= q[k];
  return g;
}

double logit_penalty(std::size_t y, const LabelDistribution& q_prime,
                     std::span<const double> logits) {
  if (q_prime.size() != logits.size()) throw ShapeError("logit_penalty: length mismatch");
  if (y >= logits.size()) throw DomainError("label out of range");
  double s = logits[y];
  for (std::size_t k = 0; k < logits.size(); ++k) {
    if (q_prime[k] != 0.0) s -= q_prime[k] * logits[k];
  }
  return s;
}

LabelDistribution solve_inner_max(std::span<const double> g, std::size_t t, double alpha) {
  if (t >= g.size()) throw DomainError("inner max: target index out of range");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("inner max: alpha must lie in [0, 1]");
  std::vector<double> q(g.size(), 0.0);
  q[argmax(g)] = alpha;
  q[t] += 1.0 - alpha;
  return LabelDistribution(std::move(q));
}

}  // namespace lsr

#include "lsr/fading_gaussian.hpp"

#include "lsr/error.hpp"
#include "lsr/numerics.hpp"

#include <cmath>
#include <random>
#include <string>

namespace lsr::gaussian {

double normal_cdf(double t) noexcept { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

Problem::Problem(std::vector<double> mu, std::vector<double> sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (mu_.empty()) throw DomainError("gaussian problem needs at least one feature");
  if (mu_.size() != sigma_.size()) throw DomainError("mu and sigma lengths differ");
  for (double s : sigma_) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("sigma must be finite and > 0");
  }
  if (!all_finite(mu_)) throw DomainError("mu must be finite");
}

Problem fading_schedule(std::size_t d) {
  if (d == 0) throw DomainError("fading schedule needs d >= 1");
  std::vector<double> mu(d), sigma(d);
  for (std::size_t i = 0; i < d; ++i) {
    sigma[i] = 1.0 - static_cast<double>(i) / static_cast<double>(d);
    mu[i] = sigma[i] * sigma[i];
  }
  return Problem(std::move(mu), std::move(sigma));
}

namespace {

void check_weights(const Problem& p, const LinearClassifier& c) {
  if (c.w.size() != p.dim()) throw DomainError("weight length does not match the problem");
  if (!all_finite(c.w)) throw DomainError("weights must be finite");
  if (linf_norm(c.w) == 0.0) throw DomainError("accuracy is undefined for w = 0");
}

double noise_scale(const Problem& p, const LinearClassifier& c) {
  double v = 0.0;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    const double t = c.w[j] * p.sigma()[j];
    v += t * t;
  }
  return std::sqrt(v);
}

double positive_part(double v) noexcept { return v > 0.0 ? v : 0.0; }

}  // namespace

double standard_accuracy(const Problem& p, const LinearClassifier& c) {
  return adversarial_accuracy(p, c, 0.0);
}

double adversarial_accuracy(const Problem& p, const LinearClassifier& c, double eps) {
  check_weights(p, c);
  if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
  double signal = 0.0;
  for (std::size_t j = 0; j < p.dim(); ++j) signal += c.w[j] * p.mu()[j];
  if (eps > 0.0) signal -= eps * l1_norm(c.w);
  return normal_cdf(signal / noise_scale(p, c));
}

LinearClassifier bayes_weights(const Problem& p) {
  LinearClassifier c;
  c.w.resize(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) {
    c.w[j] = p.mu()[j] / (p.sigma()[j] * p.sigma()[j]);
  }
  return c;
}

RobustWeights optimal_robust_weights(const Problem& p, double eps) {
  if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
  RobustWeights out;
  out.classifier.w.resize(p.dim());
  bool any = false;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    const double s2 = p.sigma()[j] * p.sigma()[j];
    const double mu = p.mu()[j];
    const double w = sign(mu) * positive_part(std::abs(mu) - eps) / s2;
    out.classifier.w[j] = w;
    any = any || w != 0.0;
  }
  out.degenerate = !any;
  return out;
}

double robust_signal(const Problem& p, double eps) {
  if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
  double delta = 0.0;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    const double m = positive_part(std::abs(p.mu()[j]) - eps);
    delta += m * m / (p.sigma()[j] * p.sigma()[j]);
  }
  return delta;
}

double optimal_adv_accuracy(const Problem& p, double eps) {
  return normal_cdf(std::sqrt(robust_signal(p, eps)));
}

DualBracket general_sigma_bounds(std::span<const double> a, double var_min, double var_max,
                                 double eps) {
  if (!(var_min > 0.0) || !(var_min <= var_max)) {
    throw DomainError("need 0 < var_min <= var_max");
  }
  if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
  double gamma = 0.0;
  for (double v : a) {
    const double m = positive_part(std::abs(v) - eps);
    gamma += m * m;
  }
  return {-std::sqrt(gamma / var_min), -std::sqrt(gamma / var_max)};
}

Sample sample(const Problem& p, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be >= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> noise(0.0, 1.0);
  Sample s;
  s.dim = p.dim();
  s.x.resize(n * p.dim());
  s.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = coin(rng) ? 1 : -1;
    s.y[i] = y;
    for (std::size_t j = 0; j < p.dim(); ++j) {
      s.x[i * p.dim() + j] = y * p.mu()[j] + p.sigma()[j] * noise(rng);
    }
  }
  return s;
}

LinearClassifier train_als_linear(const Sample& s, double alpha, int epochs, double lr) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (!(lr > 0.0)) throw DomainError("learning rate must be > 0");
  const std::size_t n = s.size();
  const std::size_t d = s.dim;
  LinearClassifier c{std::vector<double>(d, 0.0)};
  std::vector<double> grad(d);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = s.row(i);
      double score = 0.0;
      for (std::size_t j = 0; j < d; ++j) score += c.w[j] * x[j];
      const double y = s.y[i];
      const double margin = y * score;
      // Target probability on the true class: smoothed only when correct.
      const double target = margin > 0.0 ? 1.0 - alpha : 1.0;
      const double p_true = 1.0 / (1.0 + std::exp(-margin));
      const double coeff = y * (p_true - target);
      for (std::size_t j = 0; j < d; ++j) grad[j] += coeff * x[j];
    }
    for (std::size_t j = 0; j < d; ++j) c.w[j] -= lr * grad[j] / static_cast<double>(n);
    if (!all_finite(c.w)) {
      throw NumericError("ALS linear training diverged at epoch " + std::to_string(epoch));
    }
  }
  return c;
}

LinearClassifier train_als_linear(const Problem& p, const AlsTraining& cfg) {
  return train_als_linear(sample(p, cfg.n, cfg.seed), cfg.alpha, cfg.epochs, cfg.lr);
}

double empirical_accuracy(const Sample& s, const LinearClassifier& c, double eps) {
  if (c.w.size() != s.dim) throw DomainError("weight length does not match the sample");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto x = s.row(i);
    const double y = s.y[i];
    double score = 0.0;
    for (std::size_t j = 0; j < s.dim; ++j) {
      score += c.w[j] * (x[j] - eps * y * sign(c.w[j]));
    }
    if (y * score > 0.0) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(s.size());
}

}  // namespace lsr::gaussian

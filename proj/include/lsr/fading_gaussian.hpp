#pragma once
// Binary Gaussian classification with independent features,
//   Y ~ U{-1, +1},  X_j | Y = y ~ N(y mu_j, sigma_j^2),
// and linear classifiers x -> sign(w^T x). Accuracies under an l-infinity
// attacker of strength eps have closed forms; the worst-case perturbation
// of a linear model is x - eps * y * sign(w).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lsr::gaussian {

/// Standard normal CDF.
double normal_cdf(double t) noexcept;

class Problem {
 public:
  /// Throws DomainError on length mismatch, empty input or sigma <= 0.
  Problem(std::vector<double> mu, std::vector<double> sigma);

  std::size_t dim() const noexcept { return mu_.size(); }
  std::span<const double> mu() const noexcept { return mu_; }
  std::span<const double> sigma() const noexcept { return sigma_; }

 private:
  std::vector<double> mu_;
  std::vector<double> sigma_;
};

struct LinearClassifier {
  std::vector<double> w;
};

/// sigma_i = 1 - (i - 1) / d, mu_i = sigma_i^2 for i = 1..d.
Problem fading_schedule(std::size_t d);

/// Psi(w^T mu / sqrt(sum_j w_j^2 sigma_j^2)). Throws DomainError for w = 0.
double standard_accuracy(const Problem& p, const LinearClassifier& c);

/// Psi((w^T mu - eps ||w||_1) / sqrt(sum_j w_j^2 sigma_j^2)).
double adversarial_accuracy(const Problem& p, const LinearClassifier& c, double eps);

/// w_j = mu_j / sigma_j^2.
LinearClassifier bayes_weights(const Problem& p);

struct RobustWeights {
  LinearClassifier classifier;
  /// Every weight is zero (eps >= ||mu||_inf); no informative linear
  /// classifier exists and the optimal accuracy is 0.5.
  bool degenerate = false;
};

/// w_j = sigma_j^-2 sign(mu_j) (|mu_j| - eps)_+ (scale fixed to 1).
RobustWeights optimal_robust_weights(const Problem& p, double eps);

/// Delta(eps) = sum_j sigma_j^-2 ((|mu_j| - eps)_+)^2.
double robust_signal(const Problem& p, double eps);

/// Psi(sqrt(Delta(eps))); 0.5 in the degenerate case.
double optimal_adv_accuracy(const Problem& p, double eps);

struct DualBracket {
  double lower;
  double upper;
};

/// Bracket for min_{||w||_Sigma <= 1} eps ||w||_1 - w^T a when Sigma has
/// eigenvalues in [var_min, var_max]: with gamma = sum_j ((|a_j| - eps)_+)^2
/// returns (-sqrt(gamma / var_min), -sqrt(gamma / var_max)).
DualBracket general_sigma_bounds(std::span<const double> a, double var_min, double var_max,
                                 double eps);

struct Sample {
  std::size_t dim = 0;
  std::vector<double> x;  // n x dim, row-major
  std::vector<int> y;     // -1 or +1

  std::size_t size() const noexcept { return y.size(); }
  std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }
};

/// n i.i.d. draws; deterministic under `seed`.
Sample sample(const Problem& p, std::size_t n, std::uint64_t seed);

struct AlsTraining {
  double alpha = 0.0;
  std::size_t n = 20000;
  int epochs = 50;
  double lr = 0.1;
  std::uint64_t seed = 0;
};

/// Full-batch gradient descent from w = 0 on the binary ALS loss: an
/// example the current w classifies correctly (y w^T x > 0) is trained
/// towards probability 1 - alpha on its class, every other example towards
/// its hard label. Labels are re-evaluated every epoch. Throws NumericError
/// if w becomes non-finite.
LinearClassifier train_als_linear(const Problem& p, const AlsTraining& cfg);

/// Same loss on a given sample.
LinearClassifier train_als_linear(const Sample& s, double alpha, int epochs, double lr);

/// Empirical accuracy of sign(w^T x) on `s` under the worst-case
/// perturbation x - eps * y * sign(w).
double empirical_accuracy(const Sample& s, const LinearClassifier& c, double eps);

}  // namespace lsr::gaussian

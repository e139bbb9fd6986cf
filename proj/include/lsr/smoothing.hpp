#pragma once
// Label smoothing: smoothed targets q = (1 - alpha) e_y + alpha q', the
// smoothed cross-entropy -q^T log softmax(z), and the logit penalty
// (e_y - q')^T z that the smoothing adds on top of plain cross-entropy.
//
// The redistribution q' depends on the method:
//   SLS   uniform over the K - 1 wrong classes
//   ALS   all mass on the smallest logit
//   BLS   soft-min (Boltzmann at temperature T) over the wrong classes
//   SBLS  all mass on the largest wrong logit
// Argmin/argmax ties go to the lowest class index.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lsr {

enum class SmoothingMethod { sls, als, bls, sbls };

std::string_view method_name(SmoothingMethod m) noexcept;
/// Accepts SLS/ALS/BLS/SBLS in any case. Throws ParseError otherwise.
SmoothingMethod parse_method(std::string_view name);

/// BLS temperatures below this are clamped.
inline constexpr double kMinTemperature = 1e-12;
inline constexpr double kDefaultTemperature = 0.001;

struct SmoothingConfig {
  SmoothingMethod method = SmoothingMethod::als;
  double alpha = 0.0;
  double temperature = kDefaultTemperature;  // BLS only

  /// Throws DomainError unless 0 <= alpha <= 1 and temperature > 0.
  void validate() const;
};

/// A point of the probability simplex.
class LabelDistribution {
 public:
  /// Throws DomainError unless weights are nonnegative and sum to 1 within
  /// 1e-12.
  explicit LabelDistribution(std::vector<double> weights);

  static LabelDistribution one_hot(std::size_t classes, std::size_t label);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t k) const { return weights_[k]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  std::vector<double> weights_;
};

/// (1/2) ||a - b||_1
double tv_distance(const LabelDistribution& a, const LabelDistribution& b);

/// The redistribution q' of `method` for label y given logits z.
LabelDistribution redistribution(SmoothingMethod method, double temperature, std::size_t y,
                                 std::span<const double> logits);

/// (1 - alpha) e_y + alpha q'. Throws DomainError for alpha outside [0, 1],
/// K < 2 or y out of range.
LabelDistribution smooth_labels(const SmoothingConfig& cfg, std::size_t y,
                                std::span<const double> logits);

/// -sum_k q_k log softmax(z)_k
double smooth_ce(const LabelDistribution& q, std::span<const double> logits);

/// Plain cross-entropy -log softmax(z)_y.
double cross_entropy(std::size_t y, std::span<const double> logits);

/// d smooth_ce / dz = softmax(z) - q, with q held constant.
std::vector<double> smooth_ce_gradient(const LabelDistribution& q,
                                       std::span<const double> logits);

/// (e_y - q')^T z
double logit_penalty(std::size_t y, const LabelDistribution& q_prime,
                     std::span<const double> logits);

/// argmax of q^T g over the simplex subject to q_t >= 1 - alpha, i.e.
/// (1 - alpha) e_t + alpha e_{argmax g}.
LabelDistribution solve_inner_max(std::span<const double> g, std::size_t t, double alpha);

}  // namespace lsr

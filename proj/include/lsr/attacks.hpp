#pragma once
// White-box l-infinity evasion attacks on a DenseNetwork, and the
// gradient-gap estimate of the smallest fooling strength.
//
// FGSM/BIM/PGD ascend the one-hot cross-entropy of the true label
// regardless of how the model was trained. sign(0) = 0, so coordinates
// with a zero gradient are left untouched.

#include "lsr/network.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lsr {

enum class AttackKind { fgsm, bim, pgd, deepfool };

std::string_view attack_name(AttackKind k) noexcept;
/// Case-insensitive. Throws ParseError for unknown names.
AttackKind parse_attack(std::string_view name);

inline constexpr double kDeepFoolOvershoot = 0.02;
inline constexpr int kDeepFoolMaxIterations = 50;

struct AttackConfig {
  AttackKind kind = AttackKind::fgsm;
  double epsilon = 0.0;
  int steps = 1;            // BIM/PGD iterations; DeepFool iteration cap
  double step_size = 0.0;   // BIM/PGD per-step size
  double clip_min = 0.0;
  double clip_max = 1.0;
  bool random_start = true;  // PGD only
  std::uint64_t seed = 0;    // PGD random start
  double overshoot = kDeepFoolOvershoot;

  static AttackConfig fgsm(double epsilon);
  /// step_size defaults to epsilon / 4 when not given.
  static AttackConfig bim(double epsilon, int steps = 10, std::optional<double> step_size = {});
  static AttackConfig pgd(double epsilon, int steps, double step_size, std::uint64_t seed = 0);
  static AttackConfig deepfool();

  /// Throws DomainError unless epsilon >= 0, steps >= 1, clip_min < clip_max
  /// and the step size is positive for iterative kinds.
  void validate() const;
};

struct AdversarialExample {
  std::vector<double> x_adv;
  std::vector<double> delta;  // x_adv - x
  bool success = false;       // prediction differs from query_class
  std::size_t query_class = 0;  // prediction on the clean input
  std::size_t adv_class = 0;    // prediction on x_adv
  int iterations = 0;
};

/// grad_x CE(net(x), y)
std::vector<double> loss_input_gradient(const DenseNetwork& net, std::span<const double> x,
                                        std::size_t y);

/// x_adv = clip(x + eps * sign(grad_x CE)).
AdversarialExample fgsm(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                        const AttackConfig& cfg);

/// `steps` signed-gradient steps of `step_size`, each followed by
/// projection onto the eps-ball around x and the clip box.
AdversarialExample bim(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                       const AttackConfig& cfg);

/// BIM from a uniform random start in the eps-ball. The start is drawn from
/// a generator seeded with mix_seed(cfg.seed, example_index).
AdversarialExample pgd(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                       const AttackConfig& cfg, std::uint64_t example_index = 0);

/// l-infinity DeepFool. Steps towards the nearest linearised boundary
/// until the label flips or cfg.steps iterations are used; the
/// accumulated perturbation is scaled by (1 + cfg.overshoot). When `label`
/// is given and the clean prediction is already wrong, returns a zero
/// perturbation with success = true. Throws ConvergenceError if every
/// logit-difference gradient vanishes.
AdversarialExample deepfool_linf(const DenseNetwork& net, std::span<const double> x,
                                 const AttackConfig& cfg,
                                 std::optional<std::size_t> label = {});

/// Dispatch on cfg.kind.
AdversarialExample run_attack(const DenseNetwork& net, std::span<const double> x, std::size_t y,
                              const AttackConfig& cfg, std::uint64_t example_index = 0);

/// min over j != y of 1 / ||grad_x z_y - grad_x z_j||_1; +inf when every
/// gap vanishes.
double min_fooling_epsilon(const DenseNetwork& net, std::span<const double> x, std::size_t y);

}  // namespace lsr

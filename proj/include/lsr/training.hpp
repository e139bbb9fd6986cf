#pragma once
// Mini-batch SGD training with smoothed labels, a PGD adversarial-training
// baseline, and clean/adversarial evaluation.

#include "lsr/attacks.hpp"
#include "lsr/data.hpp"
#include "lsr/network.hpp"
#include "lsr/smoothing.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lsr {

/// Adversarial-training settings (MNIST linear defaults).
struct PgdTraining {
  double epsilon = 0.25;
  double step = 0.1;
  int iterations = 3;
};

struct TrainConfig {
  std::optional<SmoothingConfig> smoothing;  // none = plain cross-entropy
  double lr = 0.01;
  int epochs = 5;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  std::optional<PgdTraining> adversarial;
  double clip_min = 0.0;  // box for PGD examples
  double clip_max = 1.0;

  /// Throws DomainError on non-positive lr/epochs/batch_size, invalid
  /// smoothing, or a negative PGD budget (0 leaves inputs unperturbed).
  void validate() const;
};

inline constexpr double kDefaultLinearLr = 0.1;
inline constexpr double kDefaultMlpLr = 0.01;
inline constexpr std::size_t kDefaultBatchSize = 64;

struct TrainStats {
  std::vector<double> epoch_loss;  // mean training loss per epoch
  double seconds = 0.0;
};

/// Labels of each mini-batch are re-smoothed from the logits of the same
/// forward pass that computes the loss, and held constant for its
/// gradient. Throws NumericError naming the epoch if the loss diverges.
DenseNetwork train_ls(DenseNetwork net, const Dataset& data, const TrainConfig& cfg,
                      TrainStats* stats = nullptr);

/// Every mini-batch example is replaced by its PGD adversarial version
/// (cfg.adversarial) before a plain cross-entropy step.
DenseNetwork train_pgd_adversarial(DenseNetwork net, const Dataset& data, const TrainConfig& cfg,
                                   TrainStats* stats = nullptr);

struct AttackAccuracy {
  AttackKind kind;
  double epsilon;
  double accuracy;
};

struct EvalReport {
  std::size_t class_count = 0;
  std::size_t examples = 0;
  double standard_accuracy = 0.0;
  std::vector<AttackAccuracy> adversarial;
  /// Mean of min_fooling_epsilon over correctly classified examples with a
  /// finite value; NaN when there are none.
  double mean_min_fooling_eps = 0.0;
  std::size_t fooling_eps_count = 0;

  /// Throws DomainError if (kind, epsilon) was not evaluated.
  double accuracy(AttackKind kind, double epsilon) const;
  double chance_level() const noexcept;
  /// Accuracy strictly below 1/K.
  bool below_chance(double accuracy) const noexcept;
};

struct EvalOptions {
  bool fooling_eps = true;
  /// Limit for the (K backward passes per point) fooling-eps average; 0 =
  /// every correctly classified example.
  std::size_t fooling_eps_limit = 0;
};

/// An attacked example counts as correct only if both the clean and the
/// attacked predictions equal the label. DeepFool ignores epsilon: its
/// accuracy is the fraction of examples it fails to flip.
EvalReport evaluate(const DenseNetwork& net, const Dataset& data,
                    std::span<const AttackConfig> attacks, const EvalOptions& options = {});

double accuracy(const DenseNetwork& net, const Dataset& data);

/// Mean of z_y - min_k z_k over `data`.
double mean_logit_gap(const DenseNetwork& net, const Dataset& data);

}  // namespace lsr

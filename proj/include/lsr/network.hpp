#pragma once
// Feed-forward dense classifier with a softmax head and a reverse-mode
// pass that yields gradients with respect to the parameters and the input.
//
// A forward pass is recorded on a `Tape`; `backward` walks the tape in
// reverse. The tape holds copies of every intermediate value, so the
// network may be shared read-only across threads while each thread owns
// its tapes.

#include "lsr/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lsr {

enum class Activation { relu, identity };

std::string_view activation_name(Activation a) noexcept;
/// Throws ParseError for unknown names.
Activation parse_activation(std::string_view name);

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;     // outputs
  Activation activation = Activation::identity;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

class DenseNetwork {
 public:
  /// Validates that layer dimensions chain and parameters are finite.
  explicit DenseNetwork(std::vector<DenseLayer> layers);

  /// `widths` = (input, hidden..., classes). Hidden layers use ReLU, the
  /// output layer is affine. Weights ~ U[-s, s], s = sqrt(6 / (fan_in +
  /// fan_out)); biases start at zero.
  static DenseNetwork initialized(std::span<const std::size_t> widths,
                                  std::uint64_t seed);

  std::size_t input_dim() const noexcept { return layers_.front().inputs; }
  std::size_t class_count() const noexcept { return layers_.back().outputs; }
  std::size_t parameter_count() const noexcept;

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  /// Mutable access for optimizers. Callers keep shapes intact.
  std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }

  friend bool operator==(const DenseNetwork&, const DenseNetwork&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

struct ForwardResult {
  std::vector<double> logits;
  std::vector<double> predictions;
};

/// Intermediate values of one forward pass plus an optional scalar loss
/// attached to the logits.
class Tape {
 public:
  Tape() = default;

  bool recorded() const noexcept { return !activations_.empty(); }
  std::span<const double> input() const;
  /// activation(0) is the input, activation(l + 1) the output of layer l.
  std::span<const double> activation(std::size_t index) const;
  std::size_t activation_count() const noexcept { return activations_.size(); }
  std::span<const double> logits() const;
  std::span<const double> predictions() const;

  /// Attach a scalar loss L(z) through its value and dL/dz.
  void attach_loss(double value, std::vector<double> dloss_dlogits);
  bool has_loss() const noexcept { return loss_.has_value(); }
  double loss() const;
  std::span<const double> loss_gradient() const;

 private:
  friend Tape record_forward(const DenseNetwork&, std::span<const double>);

  std::vector<std::vector<double>> activations_;
  std::vector<double> predictions_;
  std::optional<double> loss_;
  std::vector<double> loss_gradient_;
};

struct GradientBundle {
  double loss = 0.0;
  std::vector<Tensor> weight_grads;  // per layer, {outputs, inputs}
  std::vector<Tensor> bias_grads;    // per layer, {outputs}
  std::optional<Tensor> input_grad;  // {input_dim}

  /// Zero gradients shaped like `net`'s parameters, without input_grad.
  static GradientBundle zeros_like(const DenseNetwork& net);
  bool all_finite() const noexcept;
};

/// Which derivatives `backward` should produce.
struct GradTargets {
  bool params = true;
  bool input = true;
};

ForwardResult forward(const DenseNetwork& net, std::span<const double> x);
std::size_t predict(const DenseNetwork& net, std::span<const double> x);
Tape record_forward(const DenseNetwork& net, std::span<const double> x);

/// Vector-Jacobian product of the logits: gradients of c^T z(x, theta).
/// The bundle's loss field holds c^T z.
GradientBundle backward(const DenseNetwork& net, const Tape& tape,
                        std::span<const double> logit_cotangent,
                        GradTargets targets = {});

/// Gradients of `loss_cotangent * L` for the loss attached to the tape.
/// Throws StateError when the tape is empty or carries no loss.
GradientBundle backward(const DenseNetwork& net, const Tape& tape,
                        double loss_cotangent = 1.0, GradTargets targets = {});

/// Parameter gradients of c^T z accumulated into `acc` (scaled by `scale`).
/// Used by mini-batch training to avoid a bundle per example.
void accumulate_param_grads(const DenseNetwork& net, const Tape& tape,
                            std::span<const double> logit_cotangent,
                            double scale, GradientBundle& acc);

/// theta <- theta - lr * grad. Throws NumericError on non-finite gradients
/// and ShapeError on mismatched shapes.
void sgd_step(DenseNetwork& net, const GradientBundle& grads, double lr);

}  // namespace lsr

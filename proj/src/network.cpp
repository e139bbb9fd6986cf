#include "lsr/network.hpp"

#include "lsr/error.hpp"
#include "lsr/kernels.hpp"
#include "lsr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace lsr {

std::string_view activation_name(Activation a) noexcept {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  throw ParseError("unknown activation '" + std::string(name) + "'");
}

DenseNetwork::DenseNetwork(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("network needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.inputs == 0 || layer.outputs == 0) {
      throw ShapeError(where + " has a zero dimension");
    }
    if (layer.weights.size() != layer.inputs * layer.outputs) {
      throw ShapeError(where + " weight count does not match " +
                       std::to_string(layer.outputs) + "x" + std::to_string(layer.inputs));
    }
    if (layer.bias.size() != layer.outputs) {
      throw ShapeError(where + " bias length does not match its output width");
    }
    if (l > 0 && layers_[l - 1].outputs != layer.inputs) {
      throw ShapeError(where + " input width does not chain with the previous layer");
    }
    if (!all_finite(layer.weights) || !all_finite(layer.bias)) {
      throw NumericError(where + " has non-finite parameters");
    }
  }
}

DenseNetwork DenseNetwork::initialized(std::span<const std::size_t> widths,
                                       std::uint64_t seed) {
  if (widths.size() < 2) throw ShapeError("need at least input and output widths");
  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.inputs = widths[l];
    layer.outputs = widths[l + 1];
    layer.activation = (l + 2 == widths.size()) ? Activation::identity : Activation::relu;
    const double s = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    std::uniform_real_distribution<double> dist(-s, s);
    layer.weights.resize(layer.inputs * layer.outputs);
    for (double& w : layer.weights) w = dist(rng);
    layer.bias.assign(layer.outputs, 0.0);
    layers.push_back(std::move(layer));
  }
  return DenseNetwork(std::move(layers));
}

std::size_t DenseNetwork::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

// Tape

std::span<const double> Tape::input() const { return activation(0); }

std::span<const double> Tape::activation(std::size_t index) const {
  if (!recorded()) throw StateError("no forward pass recorded on this tape");
  return activations_.at(index);
}

std::span<const double> Tape::logits() const {
  if (!recorded()) throw StateError("no forward pass recorded on this tape");
  return activations_.back();
}

std::span<const double> Tape::predictions() const {
  if (!recorded()) throw StateError("no forward pass recorded on this tape");
  return predictions_;
}

void Tape::attach_loss(double value, std::vector<double> dloss_dlogits) {
  if (!recorded()) throw StateError("cannot attach a loss before a forward pass");
  if (dloss_dlogits.size() != activations_.back().size()) {
    throw ShapeError("loss gradient length does not match the logits");
  }
  loss_ = value;
  loss_gradient_ = std::move(dloss_dlogits);
}

double Tape::loss() const {
  if (!loss_) throw StateError("no loss attached to this tape");
  return *loss_;
}

std::span<const double> Tape::loss_gradient() const {
  if (!loss_) throw StateError("no loss attached to this tape");
  return loss_gradient_;
}

// GradientBundle

GradientBundle GradientBundle::zeros_like(const DenseNetwork& net) {
  GradientBundle g;
  for (const auto& layer : net.layers()) {
    g.weight_grads.emplace_back(std::vector<std::size_t>{layer.outputs, layer.inputs});
    g.bias_grads.emplace_back(std::vector<std::size_t>{layer.outputs});
  }
  return g;
}

bool GradientBundle::all_finite() const noexcept {
  if (!std::isfinite(loss)) return false;
  for (const auto& t : weight_grads) {
    if (!t.all_finite()) return false;
  }
  for (const auto& t : bias_grads) {
    if (!t.all_finite()) return false;
  }
  return !input_grad || input_grad->all_finite();
}

// Forward

Tape record_forward(const DenseNetwork& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw ShapeError("input has " + std::to_string(x.size()) + " features, network expects " +
                     std::to_string(net.input_dim()));
  }
  Tape tape;
  tape.activations_.reserve(net.layers().size() + 1);
  tape.activations_.emplace_back(x.begin(), x.end());
  for (const auto& layer : net.layers()) {
    std::vector<double> out(layer.outputs);
    kernels::gemv(layer.weights, layer.outputs, layer.inputs, tape.activations_.back(),
                  layer.bias, out);
    if (layer.activation == Activation::relu) {
      for (double& v : out) v = v > 0.0 ? v : 0.0;
    }
    tape.activations_.push_back(std::move(out));
  }
  if (!all_finite(tape.activations_.back())) {
    throw NumericError("forward pass produced non-finite logits");
  }
  tape.predictions_ = softmax(tape.activations_.back());
  return tape;
}

ForwardResult forward(const DenseNetwork& net, std::span<const double> x) {
  Tape tape = record_forward(net, x);
  const auto z = tape.logits();
  const auto p = tape.predictions();
  return {std::vector<double>(z.begin(), z.end()), std::vector<double>(p.begin(), p.end())};
}

std::size_t predict(const DenseNetwork& net, std::span<const double> x) {
  const Tape tape = record_forward(net, x);
  return argmax(tape.logits());
}

// Backward

namespace {

// Walks the tape in reverse. `on_layer(l, upstream)` receives the
// cotangent of layer l's pre-activation output; returns the input cotangent.
template <typename OnLayer>
std::vector<double> reverse_sweep(const DenseNetwork& net, const Tape& tape,
                                  std::span<const double> logit_cotangent, bool need_input,
                                  OnLayer&& on_layer) {
  const auto& layers = net.layers();
  if (!tape.recorded()) throw StateError("backward called without a recorded forward pass");
  if (tape.activation_count() != layers.size() + 1 ||
      tape.input().size() != net.input_dim()) {
    throw StateError("tape was recorded for a different network");
  }
  if (logit_cotangent.size() != net.class_count()) {
    throw ShapeError("logit cotangent length does not match the class count");
  }
  std::vector<double> upstream(logit_cotangent.begin(), logit_cotangent.end());
  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseLayer& layer = layers[l];
    if (layer.activation == Activation::relu) {
      const auto out = tape.activation(l + 1);
      for (std::size_t j = 0; j < upstream.size(); ++j) {
        if (!(out[j] > 0.0)) upstream[j] = 0.0;
      }
    }
    on_layer(l, std::span<const double>(upstream));
    if (l == 0 && !need_input) break;
    std::vector<double> down(layer.inputs);
    kernels::gemv_t(layer.weights, layer.outputs, layer.inputs, upstream, down);
    upstream = std::move(down);
  }
  return upstream;
}

}  // namespace

GradientBundle backward(const DenseNetwork& net, const Tape& tape,
                        std::span<const double> logit_cotangent, GradTargets targets) {
  GradientBundle g;
  if (targets.params) g = GradientBundle::zeros_like(net);
  std::vector<double> input_cot = reverse_sweep(
      net, tape, logit_cotangent, targets.input,
      [&](std::size_t l, std::span<const double> upstream) {
        if (!targets.params) return;
        kernels::ger(1.0, upstream, tape.activation(l), g.weight_grads[l].values());
        std::copy(upstream.begin(), upstream.end(), g.bias_grads[l].values().begin());
      });
  if (targets.input) {
    g.input_grad = Tensor({net.input_dim()}, std::move(input_cot));
  }
  g.loss = kernels::scalar::dot(logit_cotangent, tape.logits());
  return g;
}

GradientBundle backward(const DenseNetwork& net, const Tape& tape, double loss_cotangent,
                        GradTargets targets) {
  if (!tape.recorded()) throw StateError("backward called without a recorded forward pass");
  if (!tape.has_loss()) throw StateError("backward called on a tape without an attached loss");
  std::vector<double> cot(tape.loss_gradient().begin(), tape.loss_gradient().end());
  for (double& v : cot) v *= loss_cotangent;
  GradientBundle g = backward(net, tape, cot, targets);
  g.loss = tape.loss();
  return g;
}

void accumulate_param_grads(const DenseNetwork& net, const Tape& tape,
                            std::span<const double> logit_cotangent, double scale,
                            GradientBundle& acc) {
  if (acc.weight_grads.size() != net.layers().size()) {
    throw ShapeError("gradient accumulator does not match the network");
  }
  reverse_sweep(net, tape, logit_cotangent, false,
                [&](std::size_t l, std::span<const double> upstream) {
                  kernels::ger(scale, upstream, tape.activation(l),
                               acc.weight_grads[l].values());
                  kernels::axpy(scale, upstream, acc.bias_grads[l].values());
                });
}

void sgd_step(DenseNetwork& net, const GradientBundle& grads, double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw DomainError("learning rate must be finite and >= 0");
  auto& layers = net.mutable_layers();
  if (grads.weight_grads.size() != layers.size() || grads.bias_grads.size() != layers.size()) {
    throw ShapeError("gradient bundle does not match the network depth");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (grads.weight_grads[l].size() != layers[l].weights.size() ||
        grads.bias_grads[l].size() != layers[l].bias.size()) {
      throw ShapeError("gradient shape mismatch at layer " + std::to_string(l));
    }
    if (!grads.weight_grads[l].all_finite() || !grads.bias_grads[l].all_finite()) {
      throw NumericError("non-finite gradient at layer " + std::to_string(l));
    }
  }
  if (lr == 0.0) return;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    kernels::axpy(-lr, grads.weight_grads[l].values(), layers[l].weights);
    kernels::axpy(-lr, grads.bias_grads[l].values(), layers[l].bias);
  }
}

}  // namespace lsr

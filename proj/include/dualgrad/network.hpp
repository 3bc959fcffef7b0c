// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dualgrad/kernels.hpp"
#include "dualgrad/numerics.hpp"

namespace dualgrad {

enum class Variant { standard, dual };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view s);

struct StandardLayerParams {
  Mat w;  // neurons x inputs
  Vec bias;

  std::size_t inputs() const noexcept { return w.cols(); }
  std::size_t outputs() const noexcept { return w.rows(); }
};

/// Weights stored as the difference w1 - w2 of two non-negative-rate
/// moving averages. The forward pass only ever sees w1 - w2.
struct DualLayerParams {
  Mat w1;  // neurons x inputs
  Mat w2;  // same shape as w1
  Vec bias;

  std::size_t inputs() const noexcept { return w1.cols(); }
  std::size_t outputs() const noexcept { return w1.rows(); }
  Mat effective() const;
};

/// Dense feedforward net, ReLU on hidden layers and identity on the output.
/// All layers share one variant.
class Network {
 public:
  using StandardLayers = std::vector<StandardLayerParams>;
  using DualLayers = std::vector<DualLayerParams>;

  explicit Network(StandardLayers layers, std::uint64_t seed = 0);
  explicit Network(DualLayers layers, std::uint64_t seed = 0);

  Variant variant() const noexcept;
  std::size_t num_layers() const noexcept;
  /// Layer sizes, input first: {in, h1, ..., out}.
  std::vector<std::size_t> arch() const;
  std::size_t input_size() const { return arch().front(); }
  std::size_t output_size() const { return arch().back(); }
  std::uint64_t seed() const noexcept { return seed_; }

  StandardLayers& standard_layers();
  const StandardLayers& standard_layers() const;
  DualLayers& dual_layers();
  const DualLayers& dual_layers() const;

  /// Effective weight matrix of layer k (w, or w1 - w2).
  Mat effective_weights(std::size_t k) const;
  const Vec& bias(std::size_t k) const;

  bool operator==(const Network&) const;

 private:
  void validate() const;

  std::variant<StandardLayers, DualLayers> layers_;
  std::uint64_t seed_ = 0;
};

bool operator==(const StandardLayerParams& a, const StandardLayerParams& b);
bool operator==(const DualLayerParams& a, const DualLayerParams& b);

/// Pre-activations and activations of every layer for one input.
struct ForwardTrace {
  Vec input;
  std::vector<Vec> zs;
  std::vector<Vec> activations;

  const Vec& output() const { return activations.back(); }
  /// Input seen by layer k (the network input for k == 0).
  std::span<const double> layer_input(std::size_t k) const {
    return k == 0 ? std::span<const double>(input) : std::span<const double>(activations[k - 1]);
  }
};

/// Per-layer, per-neuron dE/da * f'(z).
struct GradSignal {
  std::vector<Vec> layers;
};

inline double relu(double z) noexcept { return z > 0.0 ? z : 0.0; }
/// Derivative with the z == 0 boundary in the zero branch.
inline double relu_prime(double z) noexcept { return z > 0.0 ? 1.0 : 0.0; }

/// Uniform [-0.05, 0.05] weights, zero biases. The dual variant splits the
/// same draw into positive part (w1) and negative-part magnitude (w2), so
/// w1 - w2 reproduces the standard initialization exactly.
Network init_network(std::span<const std::size_t> arch, Variant variant, std::uint64_t seed);

inline constexpr double kInitRange = 0.05;

ForwardTrace forward(const Network& net, std::span<const double> x,
                     kernels::ExecPolicy policy = kernels::ExecPolicy::parallel);

/// Squared-error loss 0.5 * |output - target|^2.
double loss(std::span<const double> output, std::span<const double> target);

GradSignal backward(const Network& net, const ForwardTrace& trace, std::span<const double> target);

/// Standard network with w = w1 - w2 per layer.
Network collapse_dual(const Network& net);

/// Network outputs for every row of xs. Rows are independent, so the
/// parallel policy distributes rows across threads and matches serial
/// results bitwise.
Mat forward_rows(const Network& net, const Mat& xs,
                 kernels::ExecPolicy policy = kernels::ExecPolicy::parallel);

}  // namespace dualgrad

// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dualgrad/network.hpp"

namespace dualgrad {

struct TrainHyper {
  double eta = 0.01;
  double lambda = 0.0;       // L2 strength, read by l2_step only
  double stab_factor = 0.1;  // stabilizer scale on |grad| / g_avg
  double stab_cap = 1.0;     // stabilizer cap on the update rate

  /// Throws ArgumentError unless eta > 0, lambda >= 0, 0 < stab_factor <= 1
  /// and stab_cap == 1.
  void validate() const;
};

/// Per-neuron running average of |grad| for every layer.
struct StabilizerState {
  std::vector<Vec> g_avg;

  static constexpr double kInitialAverage = 1.0;
  static StabilizerState for_network(const Network& net);
};

// Single-sample update rules. `grad` is this layer's slice of the
// GradSignal and `x` the input the layer saw in the forward pass. Biases
// always take the plain SGD step. Shape mismatches throw ArgumentError and
// leave the layer untouched.

/// w -= eta * grad * x^T
void sgd_step(StandardLayerParams& layer, std::span<const double> grad, std::span<const double> x,
              const TrainHyper& h);

/// w = w * (1 - eta * lambda) - eta * grad * x^T
void l2_step(StandardLayerParams& layer, std::span<const double> grad, std::span<const double> x,
             const TrainHyper& h);

/// Moving-average rule. With a = eta * |grad[i]|:
///   grad[i] < 0:  w1[i] = w1[i] * (1 - a) + x * a
///   grad[i] > 0:  w2[i] = w2[i] * (1 - a) + x * a
///   grad[i] == 0: nothing
/// Throws UpdateRateOverflow (before touching anything) if any a > 1.
void dual_step(DualLayerParams& layer, std::span<const double> grad, std::span<const double> x,
               const TrainHyper& h);

/// min(stab_cap, |grad| / g_avg * stab_factor)
double stabilized_rate(double grad, double g_avg, const TrainHyper& h) noexcept;

/// dual_step with a = eta * stabilized_rate(grad[i], g_avg[i]); afterwards
/// g_avg[i] = g_avg[i] * (1 - eta) + |grad[i]| * eta for every nonzero grad.
void dual_stabilized_step(DualLayerParams& layer, Vec& g_avg, std::span<const double> grad,
                          std::span<const double> x, const TrainHyper& h);

struct WeightedRows {
  Vec w1_row;
  Vec w2_row;
};

/// Batch form of one neuron's decomposition over a finished sample history:
///   w1 = eta * sum_{g<0} (-g) x / sum_{g<0} (-g),   w2 analogous over g > 0.
/// An empty sign class yields a zero row.
WeightedRows batch_weighted_average(const std::vector<Vec>& xs, std::span<const double> grads,
                                    const TrainHyper& h);

enum class Method { our, our_stabilized, gd, l2 };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);
Variant variant_for(Method m) noexcept;

/// Applies `method` to every layer of `net` using one forward/backward pair.
/// All gradients come from the pre-update weights.
void apply_updates(Network& net, Method method, const ForwardTrace& trace, const GradSignal& grads,
                   const TrainHyper& h, StabilizerState& stab);

}  // namespace dualgrad

// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/updaters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualgrad/errors.hpp"

namespace dualgrad {

void TrainHyper::validate() const {
  if (!(eta > 0.0)) throw ArgumentError("eta must be > 0");
  if (!(lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
  if (!(stab_factor > 0.0 && stab_factor <= 1.0)) throw ArgumentError("stab_factor must be in (0, 1]");
  if (stab_cap != 1.0) throw ArgumentError("stab_cap must be 1");
}

StabilizerState StabilizerState::for_network(const Network& net) {
  StabilizerState s;
  const auto arch = net.arch();
  for (std::size_t k = 1; k < arch.size(); ++k) s.g_avg.emplace_back(arch[k], kInitialAverage);
  return s;
}

namespace {

void check_shapes(std::size_t neurons, std::size_t inputs, std::span<const double> grad,
                  std::span<const double> x, const char* op) {
  if (grad.size() != neurons || x.size() != inputs)
    throw ArgumentError(std::string(op) + ": layer is " + std::to_string(neurons) + "x" +
                        std::to_string(inputs) + ", got grad of " + std::to_string(grad.size()) +
                        " and input of " + std::to_string(x.size()));
}

void sgd_bias(Vec& bias, std::span<const double> grad, double eta) {
  for (std::size_t i = 0; i < bias.size(); ++i) bias[i] += -eta * grad[i];
}

// Convex move of one weight row toward x.
void blend_row(std::span<double> row, std::span<const double> x, double a) {
  const double keep = 1.0 - a;
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] * keep + x[j] * a;
}

}  // namespace

void sgd_step(StandardLayerParams& layer, std::span<const double> grad, std::span<const double> x,
              const TrainHyper& h) {
  check_shapes(layer.outputs(), layer.inputs(), grad, x, "sgd_step");
  for (std::size_t i = 0; i < layer.outputs(); ++i) {
    const double step = -h.eta * grad[i];
    auto row = layer.w.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += step * x[j];
  }
  sgd_bias(layer.bias, grad, h.eta);
}

void l2_step(StandardLayerParams& layer, std::span<const double> grad, std::span<const double> x,
             const TrainHyper& h) {
  check_shapes(layer.outputs(), layer.inputs(), grad, x, "l2_step");
  const double decay = 1.0 - h.eta * h.lambda;
  for (std::size_t i = 0; i < layer.outputs(); ++i) {
    const double step = -h.eta * grad[i];
    auto row = layer.w.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] * decay + step * x[j];
  }
  sgd_bias(layer.bias, grad, h.eta);
}

void dual_step(DualLayerParams& layer, std::span<const double> grad, std::span<const double> x,
               const TrainHyper& h) {
  check_shapes(layer.outputs(), layer.inputs(), grad, x, "dual_step");
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double a = h.eta * std::abs(grad[i]);
    if (a > 1.0) throw UpdateRateOverflow(i, a);
  }
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double a = h.eta * std::abs(grad[i]);
    if (grad[i] < 0.0)
      blend_row(layer.w1.row(i), x, a);
    else if (grad[i] > 0.0)
      blend_row(layer.w2.row(i), x, a);
  }
  sgd_bias(layer.bias, grad, h.eta);
}

double stabilized_rate(double grad, double g_avg, const TrainHyper& h) noexcept {
  return std::min(h.stab_cap, std::abs(grad) / g_avg * h.stab_factor);
}

void dual_stabilized_step(DualLayerParams& layer, Vec& g_avg, std::span<const double> grad,
                          std::span<const double> x, const TrainHyper& h) {
  check_shapes(layer.outputs(), layer.inputs(), grad, x, "dual_stabilized_step");
  if (g_avg.size() != layer.outputs()) throw ArgumentError("dual_stabilized_step: g_avg length mismatch");
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (grad[i] == 0.0) continue;
    const double a = h.eta * stabilized_rate(grad[i], g_avg[i], h);
    if (grad[i] < 0.0)
      blend_row(layer.w1.row(i), x, a);
    else
      blend_row(layer.w2.row(i), x, a);
    g_avg[i] = g_avg[i] * (1.0 - h.eta) + std::abs(grad[i]) * h.eta;
  }
  sgd_bias(layer.bias, grad, h.eta);
}

WeightedRows batch_weighted_average(const std::vector<Vec>& xs, std::span<const double> grads,
                                    const TrainHyper& h) {
  if (xs.empty()) throw ArgumentError("batch_weighted_average: no samples");
  if (grads.size() != xs.size()) throw ArgumentError("batch_weighted_average: one grad per sample required");
  const std::size_t d = xs.front().size();
  WeightedRows out{Vec(d, 0.0), Vec(d, 0.0)};
  double neg_mass = 0.0, pos_mass = 0.0;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    if (xs[n].size() != d) throw ArgumentError("batch_weighted_average: samples differ in length");
    const double g = grads[n];
    if (g == 0.0) continue;
    Vec& acc = g < 0.0 ? out.w1_row : out.w2_row;
    const double weight = std::abs(g);
    (g < 0.0 ? neg_mass : pos_mass) += weight;
    for (std::size_t j = 0; j < d; ++j) acc[j] += weight * xs[n][j];
  }
  if (neg_mass > 0.0)
    for (auto& v : out.w1_row) v = h.eta * v / neg_mass;
  if (pos_mass > 0.0)
    for (auto& v : out.w2_row) v = h.eta * v / pos_mass;
  return out;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::our: return "our";
    case Method::our_stabilized: return "our-stab";
    case Method::gd: return "gd";
    case Method::l2: return "l2";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "our") return Method::our;
  if (s == "our-stab") return Method::our_stabilized;
  if (s == "gd") return Method::gd;
  if (s == "l2") return Method::l2;
  throw ArgumentError("unknown method '" + std::string(s) + "'");
}

Variant variant_for(Method m) noexcept {
  return (m == Method::our || m == Method::our_stabilized) ? Variant::dual : Variant::standard;
}

void apply_updates(Network& net, Method method, const ForwardTrace& trace, const GradSignal& grads,
                   const TrainHyper& h, StabilizerState& stab) {
  const std::size_t n = net.num_layers();
  if (grads.layers.size() != n) throw ArgumentError("apply_updates: gradient signal has wrong depth");
  if (method == Method::our || method == Method::our_stabilized) {
    auto& layers = net.dual_layers();
    if (method == Method::our) {
      // Check every layer first so an overflow leaves the whole net unchanged.
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < grads.layers[k].size(); ++i) {
          const double a = h.eta * std::abs(grads.layers[k][i]);
          if (a > 1.0) throw UpdateRateOverflow(i, a);
        }
      for (std::size_t k = 0; k < n; ++k) dual_step(layers[k], grads.layers[k], trace.layer_input(k), h);
    } else {
      if (stab.g_avg.size() != n) throw ArgumentError("apply_updates: stabilizer state has wrong depth");
      for (std::size_t k = 0; k < n; ++k)
        dual_stabilized_step(layers[k], stab.g_avg[k], grads.layers[k], trace.layer_input(k), h);
    }
    return;
  }
  auto& layers = net.standard_layers();
  for (std::size_t k = 0; k < n; ++k) {
    if (method == Method::gd)
      sgd_step(layers[k], grads.layers[k], trace.layer_input(k), h);
    else
      l2_step(layers[k], grads.layers[k], trace.layer_input(k), h);
  }
}

}  // namespace dualgrad

// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

// Test-only reference computations. Nothing here calls into the library's
// forward/backward path; they are the independent side of the checks.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct PlainLayer {
  std::vector<std::vector<double>> w;  // neurons x inputs
  std::vector<double> b;
};

/// Squared-error loss of a ReLU MLP with a linear output layer, computed
/// with nested loops.
inline double mlp_loss(const std::vector<PlainLayer>& layers, const std::vector<double>& x,
                       const std::vector<double>& target) {
  std::vector<double> a = x;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    std::vector<double> z(layers[k].w.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      double s = layers[k].b[i];
      for (std::size_t j = 0; j < a.size(); ++j) s += layers[k].w[i][j] * a[j];
      z[i] = (k + 1 < layers.size() && s <= 0.0) ? 0.0 : s;
    }
    a = z;
  }
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e += (a[i] - target[i]) * (a[i] - target[i]);
  return 0.5 * e;
}

/// Hidden-unit sign pattern, used to reject finite-difference probes that
/// straddle a ReLU kink.
inline std::vector<bool> relu_pattern(const std::vector<PlainLayer>& layers, const std::vector<double>& x) {
  std::vector<bool> pattern;
  std::vector<double> a = x;
  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    std::vector<double> z(layers[k].w.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      double s = layers[k].b[i];
      for (std::size_t j = 0; j < a.size(); ++j) s += layers[k].w[i][j] * a[j];
      pattern.push_back(s > 0.0);
      z[i] = s > 0.0 ? s : 0.0;
    }
    a = z;
  }
  return pattern;
}

/// Steady-state std of one coordinate of w <- (1-a) w + a X with Var X = var.
inline double ema_stationary_std(double a, double var) { return std::sqrt(a / (2.0 - a) * var); }

}  // namespace oracle

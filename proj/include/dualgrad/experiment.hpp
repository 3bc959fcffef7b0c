// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualgrad/data.hpp"
#include "dualgrad/network.hpp"
#include "dualgrad/updaters.hpp"

namespace dualgrad {

/// two_layer: in -> 20 -> out.  three_layer: in -> 64 -> 32 -> out.
enum class ArchPreset { two_layer, three_layer };

int layer_count(ArchPreset p) noexcept;
ArchPreset preset_for_layers(int layers);
std::vector<std::size_t> arch_for(ArchPreset p, std::size_t inputs, std::size_t outputs);

// Stream index handed to derive_seed() for the training-sample draws.
inline constexpr std::uint64_t kSampleStream = 1;

struct ExperimentConfig {
  std::string dataset;
  ArchPreset arch = ArchPreset::two_layer;
  Method method = Method::our;
  std::size_t n_train = 100;
  long iterations = 60000;
  std::uint64_t seed = 1;
  TrainHyper hyper;
  double noise_std = 0.3;
  double y_scale = 0.1;
  long eval_interval = 500;  // 0 disables history

  /// "our", "our-stab", "gd" or "l2(<lambda>)".
  std::string method_label() const;
};

enum class Condition { clean, noisy };

/// Test metrics, reported in table units: loss x 10,000 and accuracy x 100.
/// test_loss_* is the mean of 0.5 * |output - y|^2 and is filled for every
/// task; accuracy_* only for classification.
struct MetricsRecord {
  std::string dataset;
  std::string method;
  int layers = 2;
  std::size_t n_train = 0;
  std::uint64_t seed = 0;
  Task task = Task::regression;
  double test_loss_clean = 0.0;
  double test_loss_noisy = 0.0;
  std::optional<double> accuracy_clean;
  std::optional<double> accuracy_noisy;

  /// Loss for regression, accuracy for classification.
  double score(Condition c) const;
};

inline constexpr double kLossReportScale = 10000.0;
inline constexpr double kAccuracyReportScale = 100.0;

struct HistoryPoint {
  long iteration = 0;
  double train_loss = 0.0;  // mean per-sample loss over the interval, x 10,000
  double score_clean = 0.0;
  double score_noisy = 0.0;
};

struct TrainHistory {
  std::vector<HistoryPoint> points;
};

struct TrainResult {
  Network net;
  TrainHistory history;
};

/// Single-sample training: init from cfg.seed, then cfg.iterations draws of
/// one training row (uniform, stream derive_seed(seed, kSampleStream)),
/// forward, backward and the configured update. The initial effective
/// weights and the sample sequence depend only on the seed, never on the
/// method. Throws DivergenceError on a non-finite loss and propagates
/// UpdateRateOverflow from the unstabilized dual rule.
TrainResult run_training(const ExperimentConfig& cfg, const DatasetSplit& split);

/// Metrics on both test sets. Rows are evaluated in parallel and reduced in
/// row order, so results do not depend on the thread count.
MetricsRecord evaluate(const Network& net, const DatasetSplit& split,
                       kernels::ExecPolicy policy = kernels::ExecPolicy::parallel);

/// Improvement of `method` over the gradient-descent baseline, positive when
/// better: (base - m) / base on losses, (m - base) / base on accuracies.
/// Throws UndefinedRatioError for a zero baseline and ArgumentError when the
/// records describe different conditions.
double relative_difference(const MetricsRecord& baseline, const MetricsRecord& method, Condition c);

}  // namespace dualgrad

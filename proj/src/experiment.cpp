// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dualgrad/errors.hpp"

namespace dualgrad {

int layer_count(ArchPreset p) noexcept { return p == ArchPreset::three_layer ? 3 : 2; }

ArchPreset preset_for_layers(int layers) {
  if (layers == 2) return ArchPreset::two_layer;
  if (layers == 3) return ArchPreset::three_layer;
  throw ArgumentError("layers must be 2 or 3, got " + std::to_string(layers));
}

std::vector<std::size_t> arch_for(ArchPreset p, std::size_t inputs, std::size_t outputs) {
  if (p == ArchPreset::three_layer) return {inputs, 64, 32, outputs};
  return {inputs, 20, outputs};
}

std::string ExperimentConfig::method_label() const {
  if (method != Method::l2) return std::string(to_string(method));
  char buf[48];
  std::snprintf(buf, sizeof buf, "l2(%g)", hyper.lambda);
  return buf;
}

double MetricsRecord::score(Condition c) const {
  if (task == Task::regression) return c == Condition::clean ? test_loss_clean : test_loss_noisy;
  const auto& acc = c == Condition::clean ? accuracy_clean : accuracy_noisy;
  if (!acc) throw ArgumentError("classification record without accuracy");
  return *acc;
}

namespace {

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

struct SetScores {
  double loss = 0.0;
  double accuracy = 0.0;
};

SetScores score_set(const Network& net, const Dataset& d, kernels::ExecPolicy policy) {
  if (d.y.cols() != net.output_size())
    throw ArgumentError("evaluate: network has " + std::to_string(net.output_size()) + " outputs, targets have " +
                        std::to_string(d.y.cols()));
  const Mat out = forward_rows(net, d.x, policy);
  double loss_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    loss_sum += loss(out.row(r), d.y.row(r));
    if (argmax(out.row(r)) == argmax(d.y.row(r))) ++hits;
  }
  const auto n = static_cast<double>(out.rows());
  return {loss_sum / n * kLossReportScale, static_cast<double>(hits) / n * kAccuracyReportScale};
}

}  // namespace

MetricsRecord evaluate(const Network& net, const DatasetSplit& split, kernels::ExecPolicy policy) {
  MetricsRecord m;
  m.dataset = split.test_clean.name;
  m.task = split.test_clean.task;
  m.layers = static_cast<int>(net.num_layers());
  m.n_train = split.train.size();
  m.seed = net.seed();
  const auto clean = score_set(net, split.test_clean, policy);
  const auto noisy = score_set(net, split.test_noisy, policy);
  m.test_loss_clean = clean.loss;
  m.test_loss_noisy = noisy.loss;
  if (m.task == Task::classification) {
    m.accuracy_clean = clean.accuracy;
    m.accuracy_noisy = noisy.accuracy;
  }
  return m;
}

TrainResult run_training(const ExperimentConfig& cfg, const DatasetSplit& split) {
  cfg.hyper.validate();
  if (cfg.iterations < 0) throw ArgumentError("iterations must be >= 0");
  const Dataset& train = split.train;
  train.validate();

  const auto arch = arch_for(cfg.arch, train.x.cols(), train.y.cols());
  TrainResult result{init_network(arch, variant_for(cfg.method), cfg.seed), {}};
  Network& net = result.net;
  StabilizerState stab = StabilizerState::for_network(net);
  Rng sampler(derive_seed(cfg.seed, kSampleStream));

  double interval_loss = 0.0;
  long interval_count = 0;
  for (long it = 1; it <= cfg.iterations; ++it) {
    const auto r = static_cast<std::size_t>(sampler.below(train.size()));
    const auto trace = forward(net, train.x.row(r));
    const double e = loss(trace.output(), train.y.row(r));
    if (!std::isfinite(e)) throw DivergenceError(it);
    interval_loss += e;
    ++interval_count;
    const auto grads = backward(net, trace, train.y.row(r));
    apply_updates(net, cfg.method, trace, grads, cfg.hyper, stab);

    if (cfg.eval_interval > 0 && it % cfg.eval_interval == 0) {
      const auto m = evaluate(net, split);
      result.history.points.push_back({it, interval_loss / static_cast<double>(interval_count) * kLossReportScale,
                                       m.score(Condition::clean), m.score(Condition::noisy)});
      interval_loss = 0.0;
      interval_count = 0;
    }
  }
  if (cfg.iterations > 0) {
    const auto final_trace = forward(net, train.x.row(0));
    if (!all_finite(final_trace.output())) throw DivergenceError(cfg.iterations);
  }
  return result;
}

double relative_difference(const MetricsRecord& baseline, const MetricsRecord& method, Condition c) {
  if (baseline.dataset != method.dataset || baseline.layers != method.layers || baseline.n_train != method.n_train ||
      baseline.task != method.task)
    throw ArgumentError("relative_difference: records describe different conditions");
  const double b = baseline.score(c);
  const double m = method.score(c);
  if (b == 0.0) throw UndefinedRatioError("relative_difference: baseline value is 0");
  return baseline.task == Task::regression ? (b - m) / b : (m - b) / b;
}

}  // namespace dualgrad

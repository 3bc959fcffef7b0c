// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "dualgrad/errors.hpp"
#include "dualgrad/experiment.hpp"
#include "dualgrad/records.hpp"

using namespace dualgrad;

namespace {

DatasetSplit regression_split(std::size_t n, std::size_t n_train, std::uint64_t seed) {
  Dataset d;
  d.name = "toy";
  d.x = Mat(n, 4);
  d.y = Mat(n, 1);
  Rng rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      d.x(r, c) = rng.uniform(-1, 1);
      s += static_cast<double>(c + 1) * d.x(r, c);
    }
    d.y(r, 0) = std::tanh(s);
  }
  return make_split(d, n_train, seed, 0.3, 0.1);
}

MetricsRecord record(const std::string& method, Task task, double clean, double noisy) {
  MetricsRecord m;
  m.dataset = "wine";
  m.method = method;
  m.layers = 2;
  m.n_train = 100;
  m.task = task;
  m.test_loss_clean = clean;
  m.test_loss_noisy = noisy;
  if (task == Task::classification) {
    m.accuracy_clean = clean;
    m.accuracy_noisy = noisy;
  }
  return m;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("architecture presets") {
    CHECK(arch_for(ArchPreset::two_layer, 8, 1) == std::vector<std::size_t>{8, 20, 1});
    CHECK(arch_for(ArchPreset::three_layer, 784, 10) == std::vector<std::size_t>{784, 64, 32, 10});
    CHECK(preset_for_layers(3) == ArchPreset::three_layer);
    CHECK(layer_count(ArchPreset::two_layer) == 2);
    CHECK_THROWS_AS(preset_for_layers(4), ArgumentError);
  }

  TEST_CASE("method labels") {
    ExperimentConfig cfg;
    cfg.method = Method::our_stabilized;
    CHECK(cfg.method_label() == "our-stab");
    cfg.method = Method::l2;
    cfg.hyper.lambda = 0.01;
    CHECK(cfg.method_label() == "l2(0.01)");
  }

  TEST_CASE("zero iterations returns the initialization") {
    const auto split = regression_split(60, 20, 1);
    ExperimentConfig cfg;
    cfg.iterations = 0;
    cfg.seed = 4;
    const auto r = run_training(cfg, split);
    const auto arch = arch_for(cfg.arch, 4, 1);
    CHECK(r.net == init_network(arch, Variant::dual, 4));
    CHECK(r.history.points.empty());
  }

  TEST_CASE("training is deterministic") {
    const auto split = regression_split(80, 30, 2);
    for (auto m : {Method::our, Method::our_stabilized, Method::gd, Method::l2}) {
      ExperimentConfig cfg;
      cfg.method = m;
      cfg.hyper.lambda = m == Method::l2 ? 0.01 : 0.0;
      cfg.iterations = 2000;
      cfg.eval_interval = 500;
      const auto a = run_training(cfg, split);
      const auto b = run_training(cfg, split);
      CHECK(a.net == b.net);
      CHECK(a.history.points.size() == 4);
      CHECK(a.history.points.back().iteration == 2000);
    }
  }

  TEST_CASE("gradient descent on one sample follows the quadratic closed form") {
    // Linear single neuron: the residual shrinks by 1 - eta (|x|^2 + 1) each step.
    Network::StandardLayers layers;
    layers.push_back({Mat{{0.3, -0.2}}, Vec{0.1}});
    Network net(std::move(layers));
    const Vec x{0.5, 1.5}, t{2.0};
    TrainHyper h;
    h.eta = 0.05;
    auto stab = StabilizerState::for_network(net);
    const double factor = 1.0 - h.eta * (x[0] * x[0] + x[1] * x[1] + 1.0);
    double residual = forward(net, x).output()[0] - t[0];
    double prev = loss(forward(net, x).output(), t);
    for (int k = 0; k < 100; ++k) {
      const auto tr = forward(net, x);
      apply_updates(net, Method::gd, tr, backward(net, tr, t), h, stab);
      residual *= factor;
      const double now = loss(forward(net, x).output(), t);
      CHECK(now < prev);
      CHECK(now == doctest::Approx(0.5 * residual * residual).epsilon(1e-9));
      prev = now;
    }
  }

  TEST_CASE("training reduces the training loss") {
    const auto split = regression_split(200, 100, 3);
    for (auto m : {Method::our, Method::gd}) {
      ExperimentConfig cfg;
      cfg.method = m;
      cfg.iterations = 20000;
      cfg.eval_interval = 2000;
      const auto r = run_training(cfg, split);
      CHECK(r.history.points.back().train_loss < r.history.points.front().train_loss);
    }
  }

  TEST_CASE("evaluate closed forms") {
    const auto split = regression_split(120, 40, 5);
    Network::StandardLayers zero;
    zero.push_back({Mat(1, 4), Vec{0}});
    const Network net(std::move(zero));
    const auto m = evaluate(net, split);
    double expect = 0.0;
    for (std::size_t r = 0; r < split.test_clean.size(); ++r) expect += 0.5 * split.test_clean.y(r, 0) * split.test_clean.y(r, 0);
    expect = expect / static_cast<double>(split.test_clean.size()) * kLossReportScale;
    CHECK(m.test_loss_clean == doctest::Approx(expect).epsilon(1e-12));
    CHECK(m.test_loss_noisy == doctest::Approx(expect).epsilon(1e-12));
    CHECK_FALSE(m.accuracy_clean.has_value());
    CHECK(evaluate(net, split, kernels::ExecPolicy::serial).test_loss_clean == m.test_loss_clean);
  }

  TEST_CASE("perfect classifier scores 100") {
    Dataset d = make_synthetic_two_class({50, 50}, 2, {Vec{3, 0}, Vec{-3, 0}}, 1);
    d.scaling = FeatureScaling::none;
    const auto split = make_split(d, 20, 1, 0.0, 1.0);
    // Output 0 tracks x0, output 1 tracks -x0.
    Network::StandardLayers l;
    l.push_back({Mat{{1, 0}, {-1, 0}}, Vec{0, 0}});
    const auto m = evaluate(Network(std::move(l)), split);
    REQUIRE(m.accuracy_clean.has_value());
    CHECK(*m.accuracy_clean >= 99.0);
  }

  TEST_CASE("random classifier sits near chance") {
    Dataset d;
    d.task = Task::classification;
    d.name = "chance";
    d.x = Mat(4000, 5);
    d.y = Mat(4000, 10);
    Rng rng(12);
    for (auto& v : d.x.data()) v = rng.uniform(-1, 1);
    for (std::size_t r = 0; r < 4000; ++r) d.y(r, rng.below(10)) = 1.0;
    const auto split = make_split(d, 10, 1, 0.0, 1.0);
    const std::size_t arch[] = {5, 10};
    const auto m = evaluate(init_network(arch, Variant::standard, 3), split);
    CHECK(std::abs(*m.accuracy_clean - 10.0) < 2.5);
  }

  TEST_CASE("relative difference") {
    const auto base = record("gd", Task::regression, 260.2, 320.4);
    const auto ours = record("our", Task::regression, 102.0, 105.7);
    CHECK(relative_difference(base, ours, Condition::clean) == doctest::Approx(0.6080).epsilon(1e-4));
    CHECK(relative_difference(base, base, Condition::noisy) == 0.0);

    const auto cb = record("gd", Task::classification, 73.8, 70.0);
    const auto cm = record("our", Task::classification, 74.9, 70.0);
    CHECK(std::round(relative_difference(cb, cm, Condition::clean) * 1e4) / 1e4 == 0.0149);

    CHECK_THROWS_AS(relative_difference(record("gd", Task::regression, 0.0, 1.0), ours, Condition::clean),
                    UndefinedRatioError);
    auto other = ours;
    other.n_train = 500;
    CHECK_THROWS_AS(relative_difference(base, other, Condition::clean), ArgumentError);
  }

  TEST_CASE("records round trip through json") {
    auto m = record("our", Task::classification, 91.5, 88.25);
    m.seed = 3;
    CHECK(metrics_to_json(metrics_from_json(metrics_to_json(m))) == metrics_to_json(m));
    ExperimentConfig cfg;
    cfg.dataset = "house";
    cfg.method = Method::l2;
    cfg.hyper.lambda = 0.1;
    cfg.arch = ArchPreset::three_layer;
    const auto back = config_from_json(config_to_json(cfg));
    CHECK(back.method == Method::l2);
    CHECK(back.hyper.lambda == 0.1);
    CHECK(back.arch == ArchPreset::three_layer);
    CHECK(back.dataset == "house");
  }
}

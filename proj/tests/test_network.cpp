// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "dualgrad/errors.hpp"
#include "dualgrad/network.hpp"
#include "dualgrad/network_io.hpp"
#include "oracles.hpp"

using namespace dualgrad;

namespace {

Network single_layer(Mat w, Vec b) {
  Network::StandardLayers layers;
  layers.push_back({std::move(w), std::move(b)});
  return Network(std::move(layers));
}

std::vector<oracle::PlainLayer> to_plain(const Network& net) {
  std::vector<oracle::PlainLayer> out;
  for (std::size_t k = 0; k < net.num_layers(); ++k) {
    const Mat w = net.effective_weights(k);
    oracle::PlainLayer p;
    for (std::size_t r = 0; r < w.rows(); ++r) p.w.emplace_back(w.row(r).begin(), w.row(r).end());
    p.b = net.bias(k);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

TEST_SUITE("network") {
  TEST_CASE("relu and its derivative") {
    CHECK(relu(-1) == 0.0);
    CHECK(relu_prime(-1) == 0.0);
    CHECK(relu(0) == 0.0);
    CHECK(relu_prime(0) == 0.0);
    CHECK(relu(2.5) == 2.5);
    CHECK(relu_prime(2.5) == 1.0);
  }

  TEST_CASE("init_network shapes and range") {
    const std::size_t arch[] = {8, 20, 1};
    const Network net = init_network(arch, Variant::standard, 3);
    REQUIRE(net.num_layers() == 2);
    CHECK(net.standard_layers()[0].w.rows() == 20);
    CHECK(net.standard_layers()[0].w.cols() == 8);
    CHECK(net.standard_layers()[1].w.rows() == 1);
    CHECK(net.standard_layers()[1].w.cols() == 20);
    CHECK(net.arch() == std::vector<std::size_t>{8, 20, 1});
    for (const auto& l : net.standard_layers()) {
      for (double v : l.w.data()) CHECK(std::abs(v) <= kInitRange);
      for (double v : l.bias) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(init_network(std::span<const std::size_t>{}, Variant::standard, 1), ArgumentError);
  }

  TEST_CASE("dual init is the signed split of the standard draw") {
    const std::size_t arch[] = {5, 7, 3};
    const Network s = init_network(arch, Variant::standard, 11);
    const Network d = init_network(arch, Variant::dual, 11);
    CHECK(init_network(arch, Variant::dual, 11) == d);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(d.effective_weights(k) == s.effective_weights(k));
      for (double v : d.dual_layers()[k].w1.data()) CHECK(v >= 0.0);
      for (double v : d.dual_layers()[k].w2.data()) CHECK(v >= 0.0);
    }
    CHECK_THROWS_AS(s.dual_layers(), ArgumentError);
    CHECK_THROWS_AS(d.standard_layers(), ArgumentError);
  }

  TEST_CASE("forward examples") {
    const std::size_t arch[] = {3, 4, 2};
    Network zero = init_network(arch, Variant::standard, 1);
    for (auto& l : zero.standard_layers()) std::fill(l.w.data().begin(), l.w.data().end(), 0.0);
    CHECK(forward(zero, Vec{1, 2, 3}).output() == Vec{0, 0});

    const Network one = single_layer(Mat{{1, -1}}, Vec{0.5});
    const auto t = forward(one, Vec{2, 1});
    CHECK(t.zs[0] == Vec{1.5});
    CHECK(t.output() == Vec{1.5});
    CHECK_THROWS_AS(forward(one, Vec{1, 2, 3}), ArgumentError);
  }

  TEST_CASE("backward examples") {
    const Network lin = single_layer(Mat{{1}}, Vec{0});
    const auto t = forward(lin, Vec{2});
    CHECK(backward(lin, t, Vec{1}).layers[0] == Vec{1});
    CHECK(backward(lin, t, Vec{2}).layers[0] == Vec{0});
    CHECK_THROWS_AS(backward(lin, t, Vec{1, 2}), ArgumentError);

    const std::size_t arch[] = {4, 6, 3};
    const Network net = init_network(arch, Variant::dual, 5);
    const Vec x{0.1, -0.4, 0.9, 0.3};
    const auto tr = forward(net, x);
    const auto g = backward(net, tr, tr.output());
    for (const auto& layer : g.layers)
      for (double v : layer) CHECK(v == 0.0);
  }

  TEST_CASE("loss is half the squared error") {
    CHECK(loss(Vec{1, 2}, Vec{0, 0}) == 2.5);
    CHECK(loss(Vec{3}, Vec{3}) == 0.0);
  }

  TEST_CASE("backward matches finite differences of the oracle loss") {
    Rng rng(21);
    const std::size_t arch[] = {3, 5, 4, 2};
    Network net = init_network(arch, Variant::standard, 2);
    for (auto& l : net.standard_layers()) {
      for (auto& v : l.w.data()) v = rng.uniform(-1, 1);
      for (auto& v : l.bias) v = rng.uniform(-0.5, 0.5);
    }
    const Vec x{0.3, -0.7, 1.1}, target{0.2, -0.1};
    const auto tr = forward(net, x);
    const auto g = backward(net, tr, target);
    auto plain = to_plain(net);
    const auto pattern = oracle::relu_pattern(plain, x);
    const double eps = 1e-6;
    for (std::size_t k = 0; k < plain.size(); ++k) {
      const auto in = tr.layer_input(k);
      for (std::size_t i = 0; i < plain[k].w.size(); ++i) {
        for (std::size_t j = 0; j < plain[k].w[i].size(); ++j) {
          const double w0 = plain[k].w[i][j];
          plain[k].w[i][j] = w0 + eps;
          const bool same_up = oracle::relu_pattern(plain, x) == pattern;
          const double up = oracle::mlp_loss(plain, x, target);
          plain[k].w[i][j] = w0 - eps;
          const bool same_dn = oracle::relu_pattern(plain, x) == pattern;
          const double dn = oracle::mlp_loss(plain, x, target);
          plain[k].w[i][j] = w0;
          if (!same_up || !same_dn) continue;
          const double numeric = (up - dn) / (2 * eps);
          const double analytic = g.layers[k][i] * in[j];
          CHECK(std::abs(numeric - analytic) <= 1e-6 + 1e-4 * std::abs(numeric));
        }
      }
    }
  }

  TEST_CASE("collapse_dual") {
    Network::DualLayers dl;
    dl.push_back({Mat{{2}}, Mat{{0.5}}, Vec{0.25}});
    const Network small(std::move(dl));
    const Network c = collapse_dual(small);
    CHECK(c.variant() == Variant::standard);
    CHECK(c.standard_layers()[0].w == Mat{{1.5}});
    CHECK(c.standard_layers()[0].bias == Vec{0.25});

    Network::DualLayers same;
    same.push_back({Mat{{1, 2}, {3, 4}}, Mat{{1, 2}, {3, 4}}, Vec{0, 0}});
    CHECK(collapse_dual(Network(std::move(same))).standard_layers()[0].w == Mat(2, 2, 0.0));

    const std::size_t arch[] = {6, 9, 3};
    const Network d = init_network(arch, Variant::dual, 8);
    const Network s = collapse_dual(d);
    Rng rng(1);
    for (int n = 0; n < 100; ++n) {
      Vec x(6);
      for (auto& v : x) v = rng.uniform(-2, 2);
      CHECK(forward(s, x).output() == forward(d, x).output());
    }
    CHECK_THROWS_AS(collapse_dual(s), ArgumentError);
  }

  TEST_CASE("forward_rows agrees with per-row forward") {
    const std::size_t arch[] = {4, 5, 2};
    const Network net = init_network(arch, Variant::standard, 4);
    Mat xs(10, 4);
    Rng rng(3);
    for (auto& v : xs.data()) v = rng.uniform(-1, 1);
    const Mat out = forward_rows(net, xs);
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      const auto o = forward(net, xs.row(r)).output();
      CHECK(std::equal(o.begin(), o.end(), out.row(r).begin()));
    }
  }

  TEST_CASE("json round trip is exact") {
    const std::size_t arch[] = {3, 4, 2};
    for (auto v : {Variant::standard, Variant::dual}) {
      const Network net = init_network(arch, v, 99);
      CHECK(network_from_json(network_to_json(net)) == net);
    }
    CHECK_THROWS_AS(network_from_json(nlohmann::json::parse(R"({"arch":[1,2]})")), DataFormatError);
    CHECK_THROWS_AS(load_network("/nonexistent/model.json"), Error);
  }
}

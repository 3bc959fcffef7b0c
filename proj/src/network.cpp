// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/network.hpp"

#include <cstdint>
#include <string>

#include "dualgrad/errors.hpp"

namespace dualgrad {

std::string_view to_string(Variant v) noexcept { return v == Variant::dual ? "dual" : "standard"; }

Variant parse_variant(std::string_view s) {
  if (s == "standard") return Variant::standard;
  if (s == "dual") return Variant::dual;
  throw ArgumentError("unknown network variant '" + std::string(s) + "'");
}

Mat DualLayerParams::effective() const {
  Mat w(w1.rows(), w1.cols());
  for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = w1.data()[i] - w2.data()[i];
  return w;
}

bool operator==(const StandardLayerParams& a, const StandardLayerParams& b) {
  return a.w == b.w && a.bias == b.bias;
}

bool operator==(const DualLayerParams& a, const DualLayerParams& b) {
  return a.w1 == b.w1 && a.w2 == b.w2 && a.bias == b.bias;
}

Network::Network(StandardLayers layers, std::uint64_t seed) : layers_(std::move(layers)), seed_(seed) {
  validate();
}

Network::Network(DualLayers layers, std::uint64_t seed) : layers_(std::move(layers)), seed_(seed) {
  validate();
}

void Network::validate() const {
  std::visit(
      [](const auto& layers) {
        if (layers.empty()) throw ArgumentError("network needs at least one layer");
        for (std::size_t k = 0; k < layers.size(); ++k) {
          const auto& l = layers[k];
          if (l.outputs() == 0 || l.inputs() == 0) throw ArgumentError("layer with zero size");
          if (l.bias.size() != l.outputs())
            throw ArgumentError("layer " + std::to_string(k) + ": bias length does not match neurons");
          if constexpr (std::is_same_v<std::decay_t<decltype(l)>, DualLayerParams>) {
            if (l.w1.rows() != l.w2.rows() || l.w1.cols() != l.w2.cols())
              throw ArgumentError("layer " + std::to_string(k) + ": w1 and w2 differ in shape");
          }
          if (k > 0 && layers[k - 1].outputs() != l.inputs())
            throw ArgumentError("layer " + std::to_string(k) + " does not chain with the previous layer");
        }
      },
      layers_);
}

Variant Network::variant() const noexcept {
  return std::holds_alternative<DualLayers>(layers_) ? Variant::dual : Variant::standard;
}

std::size_t Network::num_layers() const noexcept {
  return std::visit([](const auto& l) { return l.size(); }, layers_);
}

std::vector<std::size_t> Network::arch() const {
  return std::visit(
      [](const auto& layers) {
        std::vector<std::size_t> a{layers.front().inputs()};
        for (const auto& l : layers) a.push_back(l.outputs());
        return a;
      },
      layers_);
}

Network::StandardLayers& Network::standard_layers() {
  if (auto* p = std::get_if<StandardLayers>(&layers_)) return *p;
  throw ArgumentError("network is not a standard network");
}

const Network::StandardLayers& Network::standard_layers() const {
  if (const auto* p = std::get_if<StandardLayers>(&layers_)) return *p;
  throw ArgumentError("network is not a standard network");
}

Network::DualLayers& Network::dual_layers() {
  if (auto* p = std::get_if<DualLayers>(&layers_)) return *p;
  throw ArgumentError("network is not a dual network");
}

const Network::DualLayers& Network::dual_layers() const {
  if (const auto* p = std::get_if<DualLayers>(&layers_)) return *p;
  throw ArgumentError("network is not a dual network");
}

Mat Network::effective_weights(std::size_t k) const {
  if (variant() == Variant::dual) return dual_layers().at(k).effective();
  return standard_layers().at(k).w;
}

const Vec& Network::bias(std::size_t k) const {
  return std::visit([k](const auto& layers) -> const Vec& { return layers.at(k).bias; }, layers_);
}

bool Network::operator==(const Network& other) const {
  return seed_ == other.seed_ && layers_ == other.layers_;
}

Network init_network(std::span<const std::size_t> arch, Variant variant, std::uint64_t seed) {
  if (arch.size() < 2) throw ArgumentError("architecture needs at least an input and an output size");
  for (auto n : arch)
    if (n == 0) throw ArgumentError("architecture sizes must be positive");

  Rng rng(seed);
  Network::StandardLayers standard;
  for (std::size_t k = 0; k + 1 < arch.size(); ++k) {
    StandardLayerParams layer{Mat(arch[k + 1], arch[k]), Vec(arch[k + 1], 0.0)};
    for (auto& w : layer.w.data()) w = rng.uniform(-kInitRange, kInitRange);
    standard.push_back(std::move(layer));
  }
  if (variant == Variant::standard) return Network(std::move(standard), seed);

  Network::DualLayers dual;
  for (const auto& s : standard) {
    DualLayerParams layer{Mat(s.w.rows(), s.w.cols()), Mat(s.w.rows(), s.w.cols()), s.bias};
    for (std::size_t i = 0; i < s.w.size(); ++i) {
      const double w = s.w.data()[i];
      if (w > 0.0)
        layer.w1.data()[i] = w;
      else
        layer.w2.data()[i] = -w;
    }
    dual.push_back(std::move(layer));
  }
  return Network(std::move(dual), seed);
}

namespace {

void layer_forward(const StandardLayerParams& l, std::span<const double> x, Vec& z,
                   kernels::ExecPolicy policy) {
  kernels::matvec(policy, l.w, x, z);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += l.bias[i];
}

void layer_forward(const DualLayerParams& l, std::span<const double> x, Vec& z,
                   kernels::ExecPolicy policy) {
  kernels::matvec_diff(policy, l.w1, l.w2, x, z);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += l.bias[i];
}

void layer_backward(const StandardLayerParams& l, std::span<const double> grad, Vec& upstream) {
  kernels::matvec_transposed(l.w, grad, upstream);
}

void layer_backward(const DualLayerParams& l, std::span<const double> grad, Vec& upstream) {
  kernels::matvec_diff_transposed(l.w1, l.w2, grad, upstream);
}

}  // namespace

ForwardTrace forward(const Network& net, std::span<const double> x, kernels::ExecPolicy policy) {
  const auto arch = net.arch();
  if (x.size() != arch.front())
    throw ArgumentError("forward: input has " + std::to_string(x.size()) + " features, network expects " +
                        std::to_string(arch.front()));
  ForwardTrace t;
  t.input.assign(x.begin(), x.end());
  const std::size_t n = net.num_layers();
  t.zs.resize(n);
  t.activations.resize(n);
  auto run = [&](const auto& layers) {
    for (std::size_t k = 0; k < n; ++k) {
      t.zs[k].assign(layers[k].outputs(), 0.0);
      layer_forward(layers[k], t.layer_input(k), t.zs[k], policy);
      t.activations[k] = t.zs[k];
      if (k + 1 < n)
        for (auto& a : t.activations[k]) a = relu(a);
    }
  };
  if (net.variant() == Variant::dual)
    run(net.dual_layers());
  else
    run(net.standard_layers());
  return t;
}

double loss(std::span<const double> output, std::span<const double> target) {
  if (output.size() != target.size()) throw ArgumentError("loss: output and target lengths differ");
  double e = 0.0;
  for (std::size_t i = 0; i < output.size(); ++i) {
    const double d = output[i] - target[i];
    e += d * d;
  }
  return 0.5 * e;
}

GradSignal backward(const Network& net, const ForwardTrace& trace, std::span<const double> target) {
  const std::size_t n = net.num_layers();
  if (trace.zs.size() != n) throw ArgumentError("backward: trace does not belong to this network");
  if (target.size() != trace.output().size())
    throw ArgumentError("backward: target has " + std::to_string(target.size()) + " entries, output has " +
                        std::to_string(trace.output().size()));
  GradSignal g;
  g.layers.resize(n);
  Vec& out = g.layers[n - 1];
  out.resize(target.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = trace.output()[i] - target[i];

  auto run = [&](const auto& layers) {
    for (std::size_t k = n - 1; k > 0; --k) {
      Vec& below = g.layers[k - 1];
      below.assign(layers[k].inputs(), 0.0);
      layer_backward(layers[k], g.layers[k], below);
      for (std::size_t j = 0; j < below.size(); ++j) below[j] *= relu_prime(trace.zs[k - 1][j]);
    }
  };
  if (net.variant() == Variant::dual)
    run(net.dual_layers());
  else
    run(net.standard_layers());
  return g;
}

Network collapse_dual(const Network& net) {
  if (net.variant() != Variant::dual) throw ArgumentError("collapse_dual: network is not dual");
  Network::StandardLayers out;
  for (const auto& l : net.dual_layers()) out.push_back({l.effective(), l.bias});
  return Network(std::move(out), net.seed());
}

Mat forward_rows(const Network& net, const Mat& xs, kernels::ExecPolicy policy) {
  if (xs.cols() != net.input_size()) throw ArgumentError("forward_rows: feature count mismatch");
  Mat out(xs.rows(), net.output_size());
  const auto rows = static_cast<std::int64_t>(xs.rows());
  const bool par = policy == kernels::ExecPolicy::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto t = forward(net, xs.row(r), kernels::ExecPolicy::serial);
    auto dst = out.row(r);
    std::copy(t.output().begin(), t.output().end(), dst.begin());
  }
  return out;
}

}  // namespace dualgrad

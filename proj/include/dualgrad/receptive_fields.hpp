// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "dualgrad/network.hpp"

namespace dualgrad {

struct ImageShape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t pixels() const noexcept { return height * width; }
};

/// Parses "HxW", e.g. "28x28". Throws ArgumentError.
ImageShape parse_image_shape(std::string_view s);

/// Per-image min-max scaling to [0, 255]; a constant image maps to 128.
std::vector<std::uint8_t> to_gray(std::span<const double> values);

/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, std::span<const std::uint8_t> pixels, ImageShape shape);

/// One PGM per neuron of layer `layer_index` (field_NNN.pgm, effective
/// weights), plus field_NNN_w1.pgm / field_NNN_w2.pgm for dual nets. Raw
/// weights go to weights.csv (and weights_w1.csv / weights_w2.csv), one
/// neuron per row. Returns the PGM paths written.
std::vector<std::filesystem::path> export_receptive_fields(const Network& net, std::size_t layer_index,
                                                           ImageShape shape, const std::filesystem::path& out_dir);

}  // namespace dualgrad

// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/receptive_fields.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "dualgrad/errors.hpp"

namespace dualgrad {

ImageShape parse_image_shape(std::string_view s) {
  const auto x = s.find_first_of("xX");
  ImageShape shape;
  auto parse = [](std::string_view part, std::size_t& v) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    return ec == std::errc() && ptr == part.data() + part.size() && v > 0;
  };
  if (x == std::string_view::npos || !parse(s.substr(0, x), shape.height) || !parse(s.substr(x + 1), shape.width))
    throw ArgumentError("bad image shape '" + std::string(s) + "', expected HxW");
  return shape;
}

std::vector<std::uint8_t> to_gray(std::span<const double> values) {
  std::vector<std::uint8_t> out(values.size(), 128);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = static_cast<std::uint8_t>(std::lround((values[i] - *lo) / range * 255.0));
  return out;
}

void write_pgm(const std::filesystem::path& path, std::span<const std::uint8_t> pixels, ImageShape shape) {
  if (pixels.size() != shape.pixels()) throw ArgumentError("write_pgm: pixel count does not match shape");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << shape.width << ' ' << shape.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

namespace {

void write_weights_csv(const std::filesystem::path& path, const Mat& w) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[32];
  for (std::size_t r = 0; r < w.rows(); ++r) {
    for (std::size_t c = 0; c < w.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", w(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

std::string field_name(std::size_t neuron, std::string_view suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "field_%03zu%s.pgm", neuron, std::string(suffix).c_str());
  return buf;
}

}  // namespace

std::vector<std::filesystem::path> export_receptive_fields(const Network& net, std::size_t layer_index,
                                                           ImageShape shape, const std::filesystem::path& out_dir) {
  if (layer_index >= net.num_layers())
    throw ArgumentError("layer " + std::to_string(layer_index) + " does not exist");
  const Mat eff = net.effective_weights(layer_index);
  if (eff.cols() != shape.pixels())
    throw ArgumentError("layer " + std::to_string(layer_index) + " has " + std::to_string(eff.cols()) +
                        " inputs, shape " + std::to_string(shape.height) + "x" + std::to_string(shape.width) +
                        " has " + std::to_string(shape.pixels()) + " pixels");
  std::filesystem::create_directories(out_dir);

  std::vector<std::pair<std::string, const Mat*>> sets{{"", &eff}};
  if (net.variant() == Variant::dual) {
    const auto& l = net.dual_layers()[layer_index];
    sets.emplace_back("_w1", &l.w1);
    sets.emplace_back("_w2", &l.w2);
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [suffix, m] : sets) {
    for (std::size_t i = 0; i < m->rows(); ++i) {
      const auto path = out_dir / field_name(i, suffix);
      write_pgm(path, to_gray(m->row(i)), shape);
      written.push_back(path);
    }
    write_weights_csv(out_dir / ("weights" + suffix + ".csv"), *m);
  }
  return written;
}

}  // namespace dualgrad

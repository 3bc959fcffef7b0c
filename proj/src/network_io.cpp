// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/network_io.hpp"

#include <fstream>

#include "dualgrad/errors.hpp"

namespace dualgrad {

using nlohmann::json;

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(json(std::vector<double>(row.begin(), row.end())));
  }
  return rows;
}

Mat mat_from_json(const json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows) throw DataFormatError(std::string("model: bad row count in ") + what);
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw DataFormatError(std::string("model: bad column count in ") + what);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
  }
  return m;
}

}  // namespace

json network_to_json(const Network& net) {
  json doc;
  doc["arch"] = net.arch();
  doc["variant"] = std::string(to_string(net.variant()));
  doc["seed"] = net.seed();
  json layers = json::array();
  if (net.variant() == Variant::dual) {
    for (const auto& l : net.dual_layers())
      layers.push_back({{"w1", mat_to_json(l.w1)}, {"w2", mat_to_json(l.w2)}, {"bias", l.bias}});
  } else {
    for (const auto& l : net.standard_layers())
      layers.push_back({{"w", mat_to_json(l.w)}, {"bias", l.bias}});
  }
  doc["layers"] = std::move(layers);
  return doc;
}

Network network_from_json(const json& doc) {
  try {
    const auto arch = doc.at("arch").get<std::vector<std::size_t>>();
    const auto variant = parse_variant(doc.at("variant").get<std::string>());
    const auto seed = doc.value("seed", std::uint64_t{0});
    const auto& layers = doc.at("layers");
    if (arch.size() < 2 || layers.size() + 1 != arch.size())
      throw DataFormatError("model: arch and layer count disagree");
    if (variant == Variant::dual) {
      Network::DualLayers out;
      for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& l = layers[k];
        out.push_back({mat_from_json(l.at("w1"), arch[k + 1], arch[k], "w1"),
                       mat_from_json(l.at("w2"), arch[k + 1], arch[k], "w2"), l.at("bias").get<Vec>()});
      }
      return Network(std::move(out), seed);
    }
    Network::StandardLayers out;
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const auto& l = layers[k];
      out.push_back({mat_from_json(l.at("w"), arch[k + 1], arch[k], "w"), l.at("bias").get<Vec>()});
    }
    return Network(std::move(out), seed);
  } catch (const json::exception& e) {
    throw DataFormatError(std::string("model: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DataFormatError(std::string("model: ") + e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << network_to_json(net).dump() << '\n';
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataFormatError(path.string() + ": " + e.what());
  }
  return network_from_json(doc);
}

}  // namespace dualgrad

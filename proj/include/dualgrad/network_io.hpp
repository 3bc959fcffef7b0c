// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "dualgrad/network.hpp"
#include "json.hpp"

namespace dualgrad {

/// {"arch": [...], "variant": "standard"|"dual", "seed": n,
///  "layers": [{"w": [[...]], "bias": [...]}]}; dual layers carry "w1" and
/// "w2" instead of "w". Numbers are written in the shortest form that parses
/// back to the identical double, so a save/load round-trip is value-exact.
nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace dualgrad

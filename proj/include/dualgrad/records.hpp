// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dualgrad/experiment.hpp"
#include "json.hpp"

namespace dualgrad {

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const MetricsRecord& m);
MetricsRecord metrics_from_json(const nlohmann::json& j);

nlohmann::json history_to_json(const TrainHistory& h);

/// One results line: {"status": "ok"|"failed", "config": ..., "metrics": ...,
/// "history": [...], "error": "..."}.
struct RunRecord {
  ExperimentConfig config;
  std::optional<MetricsRecord> metrics;  // absent for failed runs
  TrainHistory history;
  std::string error;
};

nlohmann::json run_record_to_json(const RunRecord& r);

/// Writes the record as a single JSON line, replacing any existing file.
void write_run_record(const RunRecord& r, const std::filesystem::path& path);

struct LoadedRecords {
  std::vector<MetricsRecord> metrics;
  std::vector<std::string> warnings;  // failed runs and unreadable lines
};

/// Reads every *.jsonl file under `dir` (sorted by name).
LoadedRecords read_results_dir(const std::filesystem::path& dir);

}  // namespace dualgrad

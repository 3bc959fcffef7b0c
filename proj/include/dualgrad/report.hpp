// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualgrad/experiment.hpp"

namespace dualgrad {

inline constexpr const char* kBaselineMethod = "gd";

/// Seed-averaged scores for one (dataset, layers, method), one column pair
/// per training-set size.
struct AbsoluteRow {
  std::string dataset;
  int layers = 0;
  std::string method;
  Task task = Task::regression;
  struct Cell {
    double clean = 0.0;
    double noisy = 0.0;
    std::size_t runs = 0;
  };
  std::map<std::size_t, Cell> cells;  // keyed by n_train
};

struct RelativeRow {
  std::string dataset;
  std::string method;
  double clean_mean = 0.0;  // fractions, not percent
  double noisy_mean = 0.0;
  std::size_t cells = 0;
};

/// One (layers, n_train) contribution to a RelativeRow.
struct RelativeCell {
  std::string dataset;
  int layers = 0;
  std::string method;
  std::size_t n_train = 0;
  double clean = 0.0;  // fraction
  double noisy = 0.0;
};

struct ReportTables {
  std::vector<std::size_t> sample_sizes;
  std::vector<AbsoluteRow> absolute;
  std::vector<RelativeRow> relative;
  std::vector<RelativeCell> relative_cells;
  /// Grid cells that could not contribute, e.g. "wine/L2/our/n500: no gd baseline".
  std::vector<std::string> missing;
};

/// Averages records over seeds per condition, then per (dataset, method)
/// takes the mean relative difference against the gd baseline over every
/// (layers, n_train) cell, separately for the clean and noisy columns. The
/// grid for a dataset is every layer count and training size that appears
/// in any of its records; missing cells are reported and left out.
ReportTables aggregate_tables(const std::vector<MetricsRecord>& records);

std::string absolute_table_csv(const ReportTables& t);
std::string relative_table_csv(const ReportTables& t);
std::string relative_cells_csv(const ReportTables& t);
std::string absolute_table_text(const ReportTables& t);
std::string relative_table_text(const ReportTables& t);

/// Writes absolute.csv, absolute.txt, relative.csv and relative.txt.
void write_report(const ReportTables& t, const std::filesystem::path& dir);

}  // namespace dualgrad

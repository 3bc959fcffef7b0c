// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "dualgrad/errors.hpp"

namespace dualgrad {

namespace {

// Baseline first, then the rest alphabetically.
bool method_less(const std::string& a, const std::string& b) {
  if (a == b) return false;
  if (a == kBaselineMethod) return true;
  if (b == kBaselineMethod) return false;
  return a < b;
}

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

ReportTables aggregate_tables(const std::vector<MetricsRecord>& records) {
  ReportTables t;
  using Key = std::tuple<std::string, int, std::string>;
  struct Acc {
    Task task;
    std::map<std::size_t, AbsoluteRow::Cell> cells;
  };
  std::map<Key, Acc> rows;
  std::map<std::string, std::set<int>> layers_of;
  std::map<std::string, std::set<std::size_t>> sizes_of;
  std::set<std::size_t> sizes;

  for (const auto& r : records) {
    auto [it, inserted] = rows.try_emplace(Key{r.dataset, r.layers, r.method}, Acc{r.task, {}});
    if (!inserted && it->second.task != r.task)
      throw ArgumentError("aggregate_tables: dataset '" + r.dataset + "' mixes task types");
    auto& cell = it->second.cells[r.n_train];
    cell.clean += r.score(Condition::clean);
    cell.noisy += r.score(Condition::noisy);
    ++cell.runs;
    layers_of[r.dataset].insert(r.layers);
    sizes_of[r.dataset].insert(r.n_train);
    sizes.insert(r.n_train);
  }
  t.sample_sizes.assign(sizes.begin(), sizes.end());

  for (auto& [key, acc] : rows) {
    AbsoluteRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), acc.task, acc.cells};
    for (auto& [n, c] : row.cells) {
      c.clean /= static_cast<double>(c.runs);
      c.noisy /= static_cast<double>(c.runs);
    }
    t.absolute.push_back(std::move(row));
  }
  std::stable_sort(t.absolute.begin(), t.absolute.end(), [](const AbsoluteRow& a, const AbsoluteRow& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.layers != b.layers) return a.layers < b.layers;
    return method_less(a.method, b.method);
  });

  std::map<Key, const AbsoluteRow*> by_key;
  for (const auto& r : t.absolute) by_key[Key{r.dataset, r.layers, r.method}] = &r;
  auto averaged = [&](const std::string& ds, int layers, const std::string& method,
                      std::size_t n) -> const AbsoluteRow::Cell* {
    const auto it = by_key.find(Key{ds, layers, method});
    if (it == by_key.end()) return nullptr;
    const auto c = it->second->cells.find(n);
    return c == it->second->cells.end() ? nullptr : &c->second;
  };

  std::map<std::string, std::set<std::string>> methods_of;
  for (const auto& [key, acc] : rows) methods_of[std::get<0>(key)].insert(std::get<2>(key));

  for (const auto& [ds, methods] : methods_of) {
    std::vector<std::string> ordered(methods.begin(), methods.end());
    std::sort(ordered.begin(), ordered.end(), method_less);
    for (const auto& method : ordered) {
      if (method == kBaselineMethod) continue;
      RelativeRow rel{ds, method, 0.0, 0.0, 0};
      for (int layers : layers_of[ds]) {
        for (std::size_t n : sizes_of[ds]) {
          const std::string where = ds + "/L" + std::to_string(layers) + "/" + method + "/n" + std::to_string(n);
          const auto* m = averaged(ds, layers, method, n);
          const auto* b = averaged(ds, layers, kBaselineMethod, n);
          if (!m) {
            t.missing.push_back(where + ": no runs");
            continue;
          }
          if (!b) {
            t.missing.push_back(where + ": no gd baseline");
            continue;
          }
          if (b->clean == 0.0 || b->noisy == 0.0) {
            t.missing.push_back(where + ": baseline value is 0");
            continue;
          }
          const bool regression = by_key.at(Key{ds, layers, method})->task == Task::regression;
          auto rd = [regression](double base, double v) { return regression ? (base - v) / base : (v - base) / base; };
          const RelativeCell cell{ds, layers, method, n, rd(b->clean, m->clean), rd(b->noisy, m->noisy)};
          rel.clean_mean += cell.clean;
          rel.noisy_mean += cell.noisy;
          t.relative_cells.push_back(cell);
          ++rel.cells;
        }
      }
      if (rel.cells > 0) {
        rel.clean_mean /= static_cast<double>(rel.cells);
        rel.noisy_mean /= static_cast<double>(rel.cells);
        t.relative.push_back(rel);
      }
    }
  }
  return t;
}

std::string absolute_table_csv(const ReportTables& t) {
  std::ostringstream out;
  out << "dataset,layers,method";
  for (auto n : t.sample_sizes) out << ",clean_" << n << ",noisy_" << n;
  out << '\n';
  for (const auto& r : t.absolute) {
    out << r.dataset << ',' << r.layers << ',' << r.method;
    for (auto n : t.sample_sizes) {
      const auto it = r.cells.find(n);
      if (it == r.cells.end())
        out << ",,";
      else
        out << ',' << fmt(it->second.clean, 4) << ',' << fmt(it->second.noisy, 4);
    }
    out << '\n';
  }
  return out.str();
}

std::string relative_table_csv(const ReportTables& t) {
  std::ostringstream out;
  out << "dataset,method,clean_percent,noisy_percent,cells\n";
  for (const auto& r : t.relative)
    out << r.dataset << ',' << r.method << ',' << fmt(100.0 * r.clean_mean, 4) << ',' << fmt(100.0 * r.noisy_mean, 4)
        << ',' << r.cells << '\n';
  return out.str();
}

std::string relative_cells_csv(const ReportTables& t) {
  std::ostringstream out;
  out << "dataset,layers,method,n_train,clean_percent,noisy_percent\n";
  for (const auto& c : t.relative_cells)
    out << c.dataset << ',' << c.layers << ',' << c.method << ',' << c.n_train << ',' << fmt(100.0 * c.clean, 4)
        << ',' << fmt(100.0 * c.noisy, 4) << '\n';
  return out.str();
}

std::string absolute_table_text(const ReportTables& t) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %6s %-12s", "dataset", "layers", "method");
  out << buf;
  for (auto n : t.sample_sizes) {
    std::snprintf(buf, sizeof buf, " %10s %10s", ("clean" + std::to_string(n)).c_str(),
                  ("noisy" + std::to_string(n)).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& r : t.absolute) {
    std::snprintf(buf, sizeof buf, "%-10s %6d %-12s", r.dataset.c_str(), r.layers, r.method.c_str());
    out << buf;
    for (auto n : t.sample_sizes) {
      const auto it = r.cells.find(n);
      if (it == r.cells.end())
        std::snprintf(buf, sizeof buf, " %10s %10s", "-", "-");
      else
        std::snprintf(buf, sizeof buf, " %10.1f %10.1f", it->second.clean, it->second.noisy);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string relative_table_text(const ReportTables& t) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %-12s %10s %10s %6s\n", "dataset", "method", "clean%", "noisy%", "cells");
  out << buf;
  for (const auto& r : t.relative) {
    std::snprintf(buf, sizeof buf, "%-10s %-12s %10.1f %10.1f %6zu\n", r.dataset.c_str(), r.method.c_str(),
                  100.0 * r.clean_mean, 100.0 * r.noisy_mean, r.cells);
    out << buf;
  }
  for (const auto& m : t.missing) out << "missing: " << m << '\n';
  return out.str();
}

void write_report(const ReportTables& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, std::string> files[] = {{"absolute.csv", absolute_table_csv(t)},
                                                       {"absolute.txt", absolute_table_text(t)},
                                                       {"relative.csv", relative_table_csv(t)},
                                                       {"relative_cells.csv", relative_cells_csv(t)},
                                                       {"relative.txt", relative_table_text(t)}};
  for (const auto& [name, body] : files) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << body;
  }
}

}  // namespace dualgrad

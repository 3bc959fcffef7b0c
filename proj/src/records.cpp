// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/records.hpp"

#include <algorithm>
#include <fstream>

#include "dualgrad/errors.hpp"

namespace dualgrad {

using nlohmann::json;

json config_to_json(const ExperimentConfig& cfg) {
  return {{"dataset", cfg.dataset},
          {"layers", layer_count(cfg.arch)},
          {"method", std::string(to_string(cfg.method))},
          {"method_label", cfg.method_label()},
          {"n_train", cfg.n_train},
          {"iterations", cfg.iterations},
          {"seed", cfg.seed},
          {"eta", cfg.hyper.eta},
          {"lambda", cfg.hyper.lambda},
          {"stab_factor", cfg.hyper.stab_factor},
          {"stab_cap", cfg.hyper.stab_cap},
          {"noise_std", cfg.noise_std},
          {"y_scale", cfg.y_scale},
          {"eval_interval", cfg.eval_interval}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.dataset = j.at("dataset").get<std::string>();
  cfg.arch = preset_for_layers(j.at("layers").get<int>());
  cfg.method = parse_method(j.at("method").get<std::string>());
  cfg.n_train = j.at("n_train").get<std::size_t>();
  cfg.iterations = j.value("iterations", cfg.iterations);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.hyper.eta = j.value("eta", cfg.hyper.eta);
  cfg.hyper.lambda = j.value("lambda", cfg.hyper.lambda);
  cfg.hyper.stab_factor = j.value("stab_factor", cfg.hyper.stab_factor);
  cfg.hyper.stab_cap = j.value("stab_cap", cfg.hyper.stab_cap);
  cfg.noise_std = j.value("noise_std", cfg.noise_std);
  cfg.y_scale = j.value("y_scale", cfg.y_scale);
  cfg.eval_interval = j.value("eval_interval", cfg.eval_interval);
  return cfg;
}

json metrics_to_json(const MetricsRecord& m) {
  json j{{"dataset", m.dataset},
         {"method", m.method},
         {"layers", m.layers},
         {"n_train", m.n_train},
         {"seed", m.seed},
         {"task", std::string(to_string(m.task))},
         {"test_loss_clean", m.test_loss_clean},
         {"test_loss_noisy", m.test_loss_noisy},
         {"accuracy_clean", nullptr},
         {"accuracy_noisy", nullptr}};
  if (m.accuracy_clean) j["accuracy_clean"] = *m.accuracy_clean;
  if (m.accuracy_noisy) j["accuracy_noisy"] = *m.accuracy_noisy;
  return j;
}

MetricsRecord metrics_from_json(const json& j) {
  MetricsRecord m;
  m.dataset = j.at("dataset").get<std::string>();
  m.method = j.at("method").get<std::string>();
  m.layers = j.at("layers").get<int>();
  m.n_train = j.at("n_train").get<std::size_t>();
  m.seed = j.value("seed", std::uint64_t{0});
  const auto task = j.at("task").get<std::string>();
  if (task == "classification")
    m.task = Task::classification;
  else if (task == "regression")
    m.task = Task::regression;
  else
    throw DataFormatError("unknown task '" + task + "'");
  m.test_loss_clean = j.value("test_loss_clean", 0.0);
  m.test_loss_noisy = j.value("test_loss_noisy", 0.0);
  if (j.contains("accuracy_clean") && !j["accuracy_clean"].is_null()) m.accuracy_clean = j["accuracy_clean"].get<double>();
  if (j.contains("accuracy_noisy") && !j["accuracy_noisy"].is_null()) m.accuracy_noisy = j["accuracy_noisy"].get<double>();
  if (m.task == Task::classification && (!m.accuracy_clean || !m.accuracy_noisy))
    throw DataFormatError("classification record without accuracies");
  return m;
}

json history_to_json(const TrainHistory& h) {
  json arr = json::array();
  for (const auto& p : h.points)
    arr.push_back({{"iteration", p.iteration},
                   {"train_loss", p.train_loss},
                   {"score_clean", p.score_clean},
                   {"score_noisy", p.score_noisy}});
  return arr;
}

json run_record_to_json(const RunRecord& r) {
  json j{{"status", r.metrics ? "ok" : "failed"}, {"config", config_to_json(r.config)}};
  j["metrics"] = r.metrics ? metrics_to_json(*r.metrics) : json(nullptr);
  j["history"] = history_to_json(r.history);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

void write_run_record(const RunRecord& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << run_record_to_json(r).dump() << '\n';
}

LoadedRecords read_results_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  LoadedRecords out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = f.filename().string() + ":" + std::to_string(line_no);
      try {
        const auto j = json::parse(line);
        if (j.value("status", std::string("ok")) != "ok" || j.at("metrics").is_null()) {
          out.warnings.push_back(where + ": failed run (" + j.value("error", std::string("no metrics")) + ")");
          continue;
        }
        out.metrics.push_back(metrics_from_json(j.at("metrics")));
      } catch (const std::exception& e) {
        out.warnings.push_back(where + ": unreadable record (" + e.what() + ")");
      }
    }
  }
  return out;
}

}  // namespace dualgrad

// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#include "CLI11.hpp"
#include "dualgrad/errors.hpp"
#include "dualgrad/network_io.hpp"
#include "dualgrad/receptive_fields.hpp"
#include "dualgrad/records.hpp"
#include "dualgrad/report.hpp"
#include "json.hpp"

namespace dualgrad::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::filesystem::path resolve_data_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return "data";
}

namespace {

constexpr std::string_view kCsvPrefix = "csv:";

const char* const kIdxFiles[] = {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte",
                                 "t10k-labels-idx1-ubyte"};

bool is_csv_source(std::string_view name) { return name.substr(0, kCsvPrefix.size()) == kCsvPrefix; }

}  // namespace

bool is_known_dataset(std::string_view name) {
  return name == "wine" || name == "house" || name == "mnist" || name == "fashion" || name == "cifar10" ||
         name == "synthetic" || (is_csv_source(name) && name.size() > kCsvPrefix.size());
}

std::vector<fs::path> required_files(const DatasetSource& src, const fs::path& root) {
  const auto& n = src.name;
  if (n == "wine") return {root / "winequality-white.csv"};
  if (n == "house") return {root / "california_housing.csv"};
  if (n == "mnist" || n == "fashion") {
    const fs::path dir = root / (n == "mnist" ? "mnist" : "fashion-mnist");
    std::vector<fs::path> out;
    for (const char* f : kIdxFiles) out.push_back(dir / f);
    return out;
  }
  if (n == "cifar10") {
    const fs::path dir = root / "cifar-10-batches-bin";
    std::vector<fs::path> out;
    for (int b = 1; b <= 5; ++b) out.push_back(dir / ("data_batch_" + std::to_string(b) + ".bin"));
    out.push_back(dir / "test_batch.bin");
    return out;
  }
  if (n == "synthetic") return {};
  if (is_csv_source(n)) return {fs::path(n.substr(kCsvPrefix.size()))};
  throw ArgumentError("unknown dataset '" + n + "'");
}

LoadedDataset load_dataset(const DatasetSource& src, const fs::path& root) {
  const auto files = required_files(src, root);
  for (const auto& f : files)
    if (!fs::exists(f)) throw IoError("dataset '" + src.name + "': missing file " + f.string());
  LoadedDataset out;
  const auto& n = src.name;
  if (n == "wine") {
    out.pool = load_csv(files[0], src.target.empty() ? "quality" : src.target, src.delimiter ? src.delimiter : ';');
  } else if (n == "house") {
    out.pool = load_csv(files[0], src.target.empty() ? "MedHouseVal" : src.target, src.delimiter ? src.delimiter : ',');
  } else if (n == "mnist" || n == "fashion") {
    out.pool = load_idx_images(files[0], files[1]);
    out.canonical_test = load_idx_images(files[2], files[3]);
  } else if (n == "cifar10") {
    out.pool = load_cifar_binary({files.begin(), files.begin() + 5});
    out.canonical_test = load_cifar_binary({files[5]});
  } else if (n == "synthetic") {
    out.pool = make_synthetic_two_class({600, 600}, 4, {Vec{0.75, 0.0, 0.0, 0.0}, Vec{-0.75, 0.0, 0.0, 0.0}}, 7);
  } else {
    out.pool = load_csv(files[0], src.target.empty() ? "y" : src.target, src.delimiter ? src.delimiter : ',');
  }
  out.pool.name = n;
  if (out.canonical_test) out.canonical_test->name = n;
  return out;
}

std::string run_id(const ExperimentConfig& cfg) {
  std::string ds = cfg.dataset;
  if (is_csv_source(ds)) ds = "csv-" + fs::path(ds.substr(kCsvPrefix.size())).stem().string();
  std::string label = cfg.method_label();
  std::replace(label.begin(), label.end(), '(', '-');
  label.erase(std::remove(label.begin(), label.end(), ')'), label.end());
  return ds + "_L" + std::to_string(layer_count(cfg.arch)) + "_" + label + "_n" + std::to_string(cfg.n_train) + "_s" +
         std::to_string(cfg.seed);
}

namespace {

struct Outcome {
  RunRecord record;
  std::optional<Network> net;
  int exit_code = kExitOk;
};

// Split, train and evaluate one configuration. Training failures are
// recorded, not thrown.
Outcome execute(const ExperimentConfig& cfg, const LoadedDataset& data) {
  Outcome o;
  o.record.config = cfg;
  const auto split = make_split(data.pool, cfg.n_train, cfg.seed, cfg.noise_std, cfg.y_scale, data.canonical_test);
  try {
    auto result = run_training(cfg, split);
    auto m = evaluate(result.net, split);
    m.dataset = cfg.dataset;
    m.method = cfg.method_label();
    m.seed = cfg.seed;
    o.record.metrics = m;
    o.record.history = std::move(result.history);
    o.net = std::move(result.net);
  } catch (const DivergenceError& e) {
    o.record.error = e.what();
    o.exit_code = kExitDivergence;
  } catch (const UpdateRateOverflow& e) {
    o.record.error = e.what();
    o.exit_code = kExitDivergence;
  }
  return o;
}

struct TrainFlags {
  std::string dataset;
  std::string method = "our";
  std::optional<double> lambda;
  int layers = 2;
  std::size_t samples = 100;
  long iters = 60000;
  std::uint64_t seed = 1;
  double eta = 0.01;
  double noise_std = 0.3;
  double y_scale = 0.1;
  long eval_interval = 500;
  std::string out = "results";
  std::string data_dir;
  std::string target;
  std::string delimiter;
};

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  if (!is_known_dataset(f.dataset)) {
    err << "error: unknown dataset '" << f.dataset << "'\n";
    return kExitUsage;
  }
  ExperimentConfig cfg;
  cfg.dataset = f.dataset;
  cfg.method = parse_method(f.method);
  if (cfg.method == Method::l2) {
    if (!f.lambda) {
      err << "error: --method l2 requires --lambda\n";
      return kExitUsage;
    }
    cfg.hyper.lambda = *f.lambda;
  }
  cfg.arch = preset_for_layers(f.layers);
  cfg.n_train = f.samples;
  cfg.iterations = f.iters;
  cfg.seed = f.seed;
  cfg.hyper.eta = f.eta;
  cfg.noise_std = f.noise_std;
  cfg.y_scale = f.y_scale;
  cfg.eval_interval = f.eval_interval;
  cfg.hyper.validate();

  DatasetSource src{f.dataset, f.target, f.delimiter.empty() ? '\0' : f.delimiter[0]};
  const auto data = load_dataset(src, resolve_data_dir(f.data_dir));
  auto outcome = execute(cfg, data);

  fs::create_directories(f.out);
  const std::string id = run_id(cfg);
  write_run_record(outcome.record, fs::path(f.out) / (id + ".jsonl"));
  if (outcome.exit_code != kExitOk) {
    err << "error: " << id << ": " << outcome.record.error << '\n';
    return outcome.exit_code;
  }
  save_network(*outcome.net, fs::path(f.out) / (id + ".model.json"));
  const auto& m = *outcome.record.metrics;
  out << id << ": ";
  if (m.task == Task::regression)
    out << "test loss x1e4 clean " << m.test_loss_clean << " noisy " << m.test_loss_noisy << '\n';
  else
    out << "test accuracy % clean " << *m.accuracy_clean << " noisy " << *m.accuracy_noisy << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& results, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto loaded = read_results_dir(results);
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  if (loaded.metrics.empty()) {
    err << "error: no completed runs in " << results << '\n';
    return kExitUsage;
  }
  const auto tables = aggregate_tables(loaded.metrics);
  for (const auto& m : tables.missing) err << "warning: missing " << m << '\n';
  write_report(tables, out_dir.empty() ? fs::path(results) / "report" : fs::path(out_dir));
  out << absolute_table_text(tables) << '\n' << relative_table_text(tables);
  return kExitOk;
}

int cmd_export_fields(const std::string& model, const std::string& shape, const std::string& out_dir,
                      std::size_t layer, std::ostream& out) {
  const auto net = load_network(model);
  const auto written = export_receptive_fields(net, layer, parse_image_shape(shape), out_dir);
  out << "wrote " << written.size() << " images to " << out_dir << '\n';
  return kExitOk;
}

struct GridFlags {
  std::string manifest;
  std::string out = "results";
  std::string data_dir;
  int jobs = 1;
};

int cmd_grid(const GridFlags& f, std::ostream& out, std::ostream& err) {
  std::ifstream in(f.manifest);
  if (!in) {
    err << "error: cannot open manifest " << f.manifest << '\n';
    return kExitUsage;
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    err << "error: manifest: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<ExperimentConfig> configs;
  std::vector<std::string> datasets;
  const fs::path root = resolve_data_dir(f.data_dir.empty() ? doc.value("data_dir", std::string()) : f.data_dir);
  try {
    datasets = doc.at("datasets").get<std::vector<std::string>>();
    const auto layers = doc.value("layers", std::vector<int>{2, 3});
    const auto samples = doc.value("samples", std::vector<std::size_t>{100, 500, 1000});
    const auto seeds = doc.value("seeds", std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    const json methods = doc.value("methods", json::array({{{"method", "our"}},
                                                           {{"method", "our-stab"}},
                                                           {{"method", "gd"}},
                                                           {{"method", "l2"}, {"lambda", 0.01}},
                                                           {{"method", "l2"}, {"lambda", 0.1}}}));
    for (const auto& ds : datasets)
      if (!is_known_dataset(ds)) {
        err << "error: unknown dataset '" << ds << "'\n";
        return kExitUsage;
      }
    for (const auto& ds : datasets)
      for (const auto& p : required_files({ds}, root))
        if (!fs::exists(p)) {
          err << "error: dataset '" << ds << "': missing file " << p.string() << '\n';
          return kExitUsage;
        }
    for (const auto& ds : datasets)
      for (int l : layers)
        for (const auto& mj : methods)
          for (std::size_t n : samples)
            for (auto seed : seeds) {
              ExperimentConfig cfg;
              cfg.dataset = ds;
              cfg.arch = preset_for_layers(l);
              cfg.method = parse_method(mj.at("method").get<std::string>());
              if (cfg.method == Method::l2) cfg.hyper.lambda = mj.at("lambda").get<double>();
              cfg.n_train = n;
              cfg.seed = seed;
              cfg.iterations = doc.value("iterations", cfg.iterations);
              cfg.hyper.eta = doc.value("eta", cfg.hyper.eta);
              cfg.noise_std = doc.value("noise_std", cfg.noise_std);
              cfg.y_scale = doc.value("y_scale", cfg.y_scale);
              cfg.eval_interval = doc.value("eval_interval", cfg.eval_interval);
              cfg.hyper.validate();
              configs.push_back(cfg);
            }
  } catch (const json::exception& e) {
    err << "error: manifest: " << e.what() << '\n';
    return kExitUsage;
  }

  std::map<std::string, LoadedDataset> data;
  for (const auto& ds : datasets) data.emplace(ds, load_dataset({ds}, root));
  fs::create_directories(f.out);

  std::mutex log_mutex;
  std::size_t ok = 0, failed = 0;
  const auto count = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, f.jobs))
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& cfg = configs[static_cast<std::size_t>(i)];
    const std::string id = run_id(cfg);
    std::string message;
    bool success = false;
    try {
      auto outcome = execute(cfg, data.at(cfg.dataset));
      write_run_record(outcome.record, fs::path(f.out) / (id + ".jsonl"));
      if (outcome.net) save_network(*outcome.net, fs::path(f.out) / (id + ".model.json"));
      success = outcome.exit_code == kExitOk;
      message = success ? "ok" : outcome.record.error;
    } catch (const std::exception& e) {
      message = e.what();
    }
    std::lock_guard lock(log_mutex);
    (success ? ok : failed) += 1;
    (success ? out : err) << id << ": " << message << '\n';
  }
  out << ok << " runs completed, " << failed << " failed\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-weight (W = W1 - W2) training experiments"};
  app.require_subcommand(1);

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Train one configuration and evaluate it");
  train->add_option("--dataset", tf.dataset, "wine | house | mnist | fashion | cifar10 | synthetic | csv:<path>")
      ->required();
  train->add_option("--method", tf.method, "Update rule")
      ->check(CLI::IsMember({"our", "our-stab", "gd", "l2"}))
      ->capture_default_str();
  train->add_option("--lambda", tf.lambda, "L2 strength (required for --method l2)");
  train->add_option("--layers", tf.layers, "Architecture preset")->check(CLI::IsMember({2, 3}))->capture_default_str();
  train->add_option("--samples", tf.samples, "Training-set size")
      ->check(CLI::IsMember({100, 500, 1000}))
      ->capture_default_str();
  train->add_option("--iters", tf.iters, "Single-sample iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--seed", tf.seed, "Seed for init, split and sampling")->capture_default_str();
  train->add_option("--eta", tf.eta, "Learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--noise-std", tf.noise_std, "Std of test-time input noise")->capture_default_str();
  train->add_option("--y-scale", tf.y_scale, "Factor applied to z-scored regression targets")->capture_default_str();
  train->add_option("--eval-interval", tf.eval_interval, "History interval (0 = off)")->capture_default_str();
  train->add_option("--out", tf.out, "Output directory")->capture_default_str();
  train->add_option("--data-dir", tf.data_dir, std::string("Dataset root (default $") + kDataDirEnv + " or ./data)");
  train->add_option("--target", tf.target, "Target column for CSV datasets");
  train->add_option("--delimiter", tf.delimiter, "Field delimiter for CSV datasets");

  std::string results, report_out;
  auto* compare = app.add_subcommand("compare", "Build absolute and relative tables from finished runs");
  compare->add_option("--results", results, "Directory of run records")->required();
  compare->add_option("--out", report_out, "Report directory (default <results>/report)");

  std::string model, shape, fields_out;
  std::size_t layer = 0;
  auto* fields = app.add_subcommand("export-fields", "Write receptive-field images of one layer");
  fields->add_option("--model", model, "Serialized network")->required();
  fields->add_option("--shape", shape, "Image shape HxW")->required();
  fields->add_option("--out", fields_out, "Output directory")->required();
  fields->add_option("--layer", layer, "Layer index")->capture_default_str();

  GridFlags gf;
  auto* grid = app.add_subcommand("grid", "Run every configuration of a JSON manifest");
  grid->add_option("--manifest", gf.manifest, "Manifest file")->required();
  grid->add_option("--out", gf.out, "Output directory")->capture_default_str();
  grid->add_option("--data-dir", gf.data_dir, "Dataset root");
  grid->add_option("--jobs", gf.jobs, "Concurrent runs")->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back(args.empty() ? "dualgrad" : args[0].c_str());
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*train) return cmd_train(tf, out, err);
    if (*compare) return cmd_compare(results, report_out, out, err);
    if (*fields) return cmd_export_fields(model, shape, fields_out, layer, out);
    if (*grid) return cmd_grid(gf, out, err);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dualgrad::cli

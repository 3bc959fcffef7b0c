// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dualgrad/data.hpp"
#include "dualgrad/experiment.hpp"

namespace dualgrad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  // bad flags, missing or malformed data
inline constexpr int kExitDivergence = 3;

inline constexpr const char* kDataDirEnv = "DUALGRAD_DATA_DIR";

/// Dataset root: the explicit flag value if given, else $DUALGRAD_DATA_DIR,
/// else ./data.
std::filesystem::path resolve_data_dir(const std::string& flag_value);

/// Where a named dataset lives below the data root:
///   wine     winequality-white.csv (';', target "quality")
///   house    california_housing.csv (',', target "MedHouseVal")
///   mnist    mnist/{train,t10k}-{images-idx3,labels-idx1}-ubyte
///   fashion  fashion-mnist/ with the same file names
///   cifar10  cifar-10-batches-bin/data_batch_{1..5}.bin, test_batch.bin
///   synthetic  generated two-class blobs, no files
/// A name of the form "csv:<path>" loads any regression CSV (see
/// DatasetSource::target / delimiter).
struct DatasetSource {
  std::string name;
  std::string target = "";
  char delimiter = 0;
};

bool is_known_dataset(std::string_view name);
std::vector<std::filesystem::path> required_files(const DatasetSource& src, const std::filesystem::path& root);

struct LoadedDataset {
  Dataset pool;
  std::optional<Dataset> canonical_test;
};

LoadedDataset load_dataset(const DatasetSource& src, const std::filesystem::path& root);

/// Run identifier used for output file names, e.g. "wine_L2_our_n100_s1".
std::string run_id(const ExperimentConfig& cfg);

/// Entry point shared by the executable and the tests. argv[0] is ignored.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualgrad::cli

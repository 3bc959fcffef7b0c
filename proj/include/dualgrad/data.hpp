// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualgrad/numerics.hpp"

namespace dualgrad {

enum class Task { regression, classification };

std::string_view to_string(Task t) noexcept;

/// How make_split scales features: tabular data is z-scored on the training
/// rows; image loaders already map pixels to [0, 1] and are left alone.
enum class FeatureScaling { zscore, none };

struct Dataset {
  Mat x;  // samples x features
  Mat y;  // samples x targets (one-hot rows for classification)
  Task task = Task::regression;
  std::string name;
  FeatureScaling scaling = FeatureScaling::zscore;

  std::size_t size() const noexcept { return x.rows(); }
  /// Throws ArgumentError on row-count mismatch, empty data or non one-hot labels.
  void validate() const;
};

struct DatasetSplit {
  Dataset train;
  Dataset test_clean;
  Dataset test_noisy;
  NormStats norm;         // feature stats fitted on train (identity when not z-scored)
  NormStats target_norm;  // regression target stats fitted on train
  double y_scale = 1.0;
};

// Stream indices handed to derive_seed() by make_split.
inline constexpr std::uint64_t kSubsampleStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

/// Header row required. Features are all non-target columns in file order.
/// For classification the target column holds integer class labels 0..K-1,
/// which are expanded to one-hot rows.
Dataset load_csv(const std::filesystem::path& path, std::string_view target_column, char delimiter,
                 Task task = Task::regression);

inline Dataset load_csv_regression(const std::filesystem::path& path, std::string_view target_column,
                                   char delimiter) {
  return load_csv(path, target_column, delimiter, Task::regression);
}

/// Writes features as f0..fN-1 followed by "y" (regression, one column per
/// target: y, or y0..yM-1) or "label" (classification). Values use 17
/// significant digits so load_csv reproduces them exactly.
void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter = ',');

/// IDX image file (magic 0x00000803, big-endian counts, uint8 pixels) plus
/// IDX label file (magic 0x00000801). Pixels are divided by 255.
Dataset load_idx_images(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                        std::size_t num_classes = 10);

/// Inverse of load_idx_images for fixtures; pixels are round(x * 255).
void write_idx(const Dataset& d, std::size_t image_rows, std::size_t image_cols,
               const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// CIFAR-10 binary batches: records of 1 label byte + 3072 pixel bytes.
Dataset load_cifar_binary(const std::vector<std::filesystem::path>& paths);

inline constexpr std::size_t kCifarRecordBytes = 3073;

/// Seeded subsample of n_train training rows without replacement. The test
/// set is `canonical_test` when given, otherwise the unsampled remainder in
/// original order. Features are normalized with train statistics (per
/// d.scaling); regression targets are z-scored on train and multiplied by
/// y_scale. test_noisy adds N(0, noise_std^2) to every normalized test feature.
DatasetSplit make_split(const Dataset& d, std::size_t n_train, std::uint64_t seed, double noise_std,
                        double y_scale, const std::optional<Dataset>& canonical_test = std::nullopt);

/// Two Gaussian blobs (unit std per coordinate) around means[0] and means[1].
/// Per-coordinate standard deviation of the synthetic blobs.
inline constexpr double kSyntheticStd = 0.5;

Dataset make_synthetic_two_class(std::array<std::size_t, 2> n_per_class, std::size_t dim,
                                 const std::array<Vec, 2>& means, std::uint64_t seed);

}  // namespace dualgrad

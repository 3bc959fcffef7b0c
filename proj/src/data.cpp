// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dualgrad/errors.hpp"

namespace dualgrad {

std::string_view to_string(Task t) noexcept {
  return t == Task::classification ? "classification" : "regression";
}

void Dataset::validate() const {
  if (x.rows() == 0) throw ArgumentError("dataset '" + name + "' is empty");
  if (x.rows() != y.rows()) throw ArgumentError("dataset '" + name + "': x and y row counts differ");
  if (task != Task::classification) return;
  for (std::size_t r = 0; r < y.rows(); ++r) {
    std::size_t ones = 0;
    for (double v : y.row(r)) {
      if (v == 1.0)
        ++ones;
      else if (v != 0.0)
        ones = 2;
    }
    if (ones != 1) throw ArgumentError("dataset '" + name + "': row " + std::to_string(r) + " is not one-hot");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_line(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Mat one_hot(const std::vector<std::size_t>& labels, std::size_t num_classes) {
  Mat y(labels.size(), num_classes, 0.0);
  for (std::size_t r = 0; r < labels.size(); ++r) y(r, labels[r]) = 1.0;
  return y;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset) {
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                         static_cast<char>(v)};
  out.write(bytes, 4);
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out{Mat(rows.size(), d.x.cols()), Mat(rows.size(), d.y.cols()), d.task, d.name, d.scaling};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy_n(d.x.row(rows[r]).begin(), d.x.cols(), out.x.row(r).begin());
    std::copy_n(d.y.row(rows[r]).begin(), d.y.cols(), out.y.row(r).begin());
  }
  return out;
}

NormStats identity_stats(std::size_t n) { return {Vec(n, 0.0), Vec(n, 1.0)}; }

}  // namespace

Dataset load_csv(const std::filesystem::path& path, std::string_view target_column, char delimiter, Task task) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string where = path.string();

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_line(line, delimiter)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw DataFormatError(where + ": empty file");
  const auto target_it = std::find(header.begin(), header.end(), target_column);
  if (target_it == header.end())
    throw DataFormatError(where + ": no column named '" + std::string(target_column) + "'");
  const auto target_idx = static_cast<std::size_t>(target_it - header.begin());
  const std::size_t n_features = header.size() - 1;
  if (n_features == 0) throw DataFormatError(where + ": no feature columns");

  std::vector<double> xs, ys;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line, delimiter);
    if (fields.size() != header.size())
      throw DataFormatError(where + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(header.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = parse_double(fields[c]);
      if (!v)
        throw DataFormatError(where + ": line " + std::to_string(line_no) + ", column '" + header[c] +
                              "': cannot parse '" + std::string(fields[c]) + "'");
      (c == target_idx ? ys : xs).push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw DataFormatError(where + ": no data rows");

  Dataset d;
  d.name = path.stem().string();
  d.task = task;
  d.x = Mat(rows, n_features);
  std::copy(xs.begin(), xs.end(), d.x.data().begin());
  if (task == Task::regression) {
    d.y = Mat(rows, 1);
    std::copy(ys.begin(), ys.end(), d.y.data().begin());
  } else {
    std::vector<std::size_t> labels;
    for (std::size_t r = 0; r < rows; ++r) {
      const double v = ys[r];
      if (v < 0.0 || v != std::floor(v) || v > 1e6)
        throw DataFormatError(where + ": class label '" + std::to_string(v) + "' is not a small non-negative integer");
      labels.push_back(static_cast<std::size_t>(v));
    }
    d.y = one_hot(labels, *std::max_element(labels.begin(), labels.end()) + 1);
  }
  return d;
}

void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t c = 0; c < d.x.cols(); ++c) out << 'f' << c << delimiter;
  if (d.task == Task::classification)
    out << "label";
  else if (d.y.cols() == 1)
    out << 'y';
  else
    for (std::size_t c = 0; c < d.y.cols(); ++c) out << (c ? std::string(1, delimiter) : "") << 'y' << c;
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t r = 0; r < d.x.rows(); ++r) {
    for (double v : d.x.row(r)) {
      put(v);
      out << delimiter;
    }
    if (d.task == Task::classification) {
      out << argmax(d.y.row(r));
    } else {
      for (std::size_t c = 0; c < d.y.cols(); ++c) {
        if (c) out << delimiter;
        put(d.y(r, c));
      }
    }
    out << '\n';
  }
}

Dataset load_idx_images(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                        std::size_t num_classes) {
  const auto img = read_file(images_path);
  const auto lab = read_file(labels_path);
  if (img.size() < 16 || read_be32(img, 0) != 0x00000803u)
    throw DataFormatError(images_path.string() + ": not an IDX image file (magic 0x00000803)");
  if (lab.size() < 8 || read_be32(lab, 0) != 0x00000801u)
    throw DataFormatError(labels_path.string() + ": not an IDX label file (magic 0x00000801)");
  const std::size_t count = read_be32(img, 4);
  const std::size_t rows = read_be32(img, 8);
  const std::size_t cols = read_be32(img, 12);
  const std::size_t label_count = read_be32(lab, 4);
  if (count != label_count)
    throw DataFormatError("IDX: " + std::to_string(count) + " images but " + std::to_string(label_count) + " labels");
  const std::size_t pixels = rows * cols;
  if (count == 0 || pixels == 0) throw DataFormatError(images_path.string() + ": empty IDX file");
  if (img.size() != 16 + count * pixels) throw DataFormatError(images_path.string() + ": truncated or oversized");
  if (lab.size() != 8 + count) throw DataFormatError(labels_path.string() + ": truncated or oversized");

  Dataset d;
  d.name = images_path.stem().string();
  d.task = Task::classification;
  d.scaling = FeatureScaling::none;
  d.x = Mat(count, pixels);
  for (std::size_t i = 0; i < count * pixels; ++i) d.x.data()[i] = img[16 + i] / 255.0;
  std::vector<std::size_t> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    labels[i] = lab[8 + i];
    if (labels[i] >= num_classes)
      throw DataFormatError(labels_path.string() + ": label " + std::to_string(labels[i]) + " out of range");
  }
  d.y = one_hot(labels, num_classes);
  return d;
}

void write_idx(const Dataset& d, std::size_t image_rows, std::size_t image_cols,
               const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  if (d.task != Task::classification || image_rows * image_cols != d.x.cols())
    throw ArgumentError("write_idx: needs a classification dataset with rows*cols features");
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  if (!img || !lab) throw IoError("cannot write IDX fixture");
  write_be32(img, 0x00000803u);
  write_be32(img, static_cast<std::uint32_t>(d.size()));
  write_be32(img, static_cast<std::uint32_t>(image_rows));
  write_be32(img, static_cast<std::uint32_t>(image_cols));
  for (double v : d.x.data()) img.put(static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  write_be32(lab, 0x00000801u);
  write_be32(lab, static_cast<std::uint32_t>(d.size()));
  for (std::size_t r = 0; r < d.size(); ++r) lab.put(static_cast<char>(argmax(d.y.row(r))));
}

Dataset load_cifar_binary(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw ArgumentError("load_cifar_binary: no files given");
  std::vector<unsigned char> all;
  for (const auto& p : paths) {
    const auto buf = read_file(p);
    if (buf.empty() || buf.size() % kCifarRecordBytes != 0)
      throw DataFormatError(p.string() + ": size " + std::to_string(buf.size()) + " is not a multiple of " +
                            std::to_string(kCifarRecordBytes));
    all.insert(all.end(), buf.begin(), buf.end());
  }
  const std::size_t count = all.size() / kCifarRecordBytes;
  constexpr std::size_t kPixels = kCifarRecordBytes - 1;
  Dataset d;
  d.name = "cifar10";
  d.task = Task::classification;
  d.scaling = FeatureScaling::none;
  d.x = Mat(count, kPixels);
  std::vector<std::size_t> labels(count);
  for (std::size_t r = 0; r < count; ++r) {
    const unsigned char* rec = all.data() + r * kCifarRecordBytes;
    if (rec[0] >= 10) throw DataFormatError("CIFAR record " + std::to_string(r) + ": label out of range");
    labels[r] = rec[0];
    auto row = d.x.row(r);
    for (std::size_t j = 0; j < kPixels; ++j) row[j] = rec[1 + j] / 255.0;
  }
  d.y = one_hot(labels, 10);
  return d;
}

DatasetSplit make_split(const Dataset& d, std::size_t n_train, std::uint64_t seed, double noise_std,
                        double y_scale, const std::optional<Dataset>& canonical_test) {
  d.validate();
  if (n_train == 0 || n_train > d.size())
    throw ArgumentError("make_split: n_train = " + std::to_string(n_train) + " but dataset has " +
                        std::to_string(d.size()) + " rows");
  if (!(noise_std >= 0.0)) throw ArgumentError("make_split: noise_std must be >= 0");
  if (canonical_test) {
    canonical_test->validate();
    if (canonical_test->x.cols() != d.x.cols() || canonical_test->y.cols() != d.y.cols())
      throw ArgumentError("make_split: canonical test set has a different shape");
  }

  // Partial Fisher-Yates: the first n_train slots become the training rows.
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng pick(derive_seed(seed, kSubsampleStream));
  for (std::size_t i = 0; i < n_train; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  const std::vector<std::size_t> train_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));

  DatasetSplit s;
  s.train = take_rows(d, train_rows);
  if (canonical_test) {
    s.test_clean = *canonical_test;
  } else {
    std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(rest.begin(), rest.end());
    if (rest.empty()) throw ArgumentError("make_split: no rows left for the test set");
    s.test_clean = take_rows(d, rest);
  }
  s.test_clean.name = d.name;

  if (d.scaling == FeatureScaling::zscore && n_train >= 2) {
    s.norm = zscore_fit(s.train.x);
    s.train.x = zscore_apply(s.norm, s.train.x);
    s.test_clean.x = zscore_apply(s.norm, s.test_clean.x);
  } else {
    s.norm = identity_stats(d.x.cols());
  }

  s.y_scale = y_scale;
  if (d.task == Task::regression) {
    s.target_norm = n_train >= 2 ? zscore_fit(s.train.y) : identity_stats(d.y.cols());
    auto scale_targets = [&](Mat& y) {
      y = zscore_apply(s.target_norm, y);
      for (auto& v : y.data()) v *= y_scale;
    };
    scale_targets(s.train.y);
    scale_targets(s.test_clean.y);
  } else {
    s.target_norm = identity_stats(d.y.cols());
  }

  s.test_noisy = s.test_clean;
  if (noise_std > 0.0) {
    Rng noise(derive_seed(seed, kNoiseStream));
    const Vec eps = gauss_sample(noise, 0.0, noise_std, s.test_noisy.x.size());
    for (std::size_t i = 0; i < eps.size(); ++i) s.test_noisy.x.data()[i] += eps[i];
  }
  return s;
}

Dataset make_synthetic_two_class(std::array<std::size_t, 2> n_per_class, std::size_t dim,
                                 const std::array<Vec, 2>& means, std::uint64_t seed) {
  if (means[0].size() != dim || means[1].size() != dim)
    throw ArgumentError("make_synthetic_two_class: means must have length dim");
  const std::size_t n = n_per_class[0] + n_per_class[1];
  if (n == 0 || dim == 0) throw ArgumentError("make_synthetic_two_class: empty dataset");
  Rng rng(seed);
  Dataset d{Mat(n, dim), Mat(n, 2, 0.0), Task::classification, "synthetic", FeatureScaling::zscore};
  std::size_t r = 0;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t k = 0; k < n_per_class[c]; ++k, ++r) {
      for (std::size_t j = 0; j < dim; ++j) d.x(r, j) = means[c][j] + kSyntheticStd * rng.normal();
      d.y(r, c) = 1.0;
    }
  return d;
}

}  // namespace dualgrad

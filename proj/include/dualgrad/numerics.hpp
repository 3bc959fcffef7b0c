// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace dualgrad {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Derives an independent child seed from (parent, stream) with the
/// splitmix64 finalizer. Used to give each consumer its own stream.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

/// xoshiro256** 1.0 (Blackman & Vigna), state seeded by four successive
/// splitmix64 outputs of the 64-bit seed (increment 0x9e3779b97f4a7c15,
/// mixers 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb).
///
/// Doubles are formed from the top 53 bits: (next() >> 11) * 2^-53.
/// Normal draws use the Marsaglia polar method and cache the second value.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer in [0, n); n > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;

  /// Child generator seeded with derive_seed(seed, stream).
  Rng split(std::uint64_t stream) const noexcept { return Rng(derive_seed(seed_, stream)); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct NormStats {
  Vec means;
  Vec stds;
};

/// m * v. Throws ArgumentError if m.cols() != v.size().
Vec matvec(const Mat& m, std::span<const double> v);

/// n i.i.d. N(mean, std^2) draws. std == 0 yields exactly `mean`.
Vec gauss_sample(Rng& rng, double mean, double std, std::size_t n);

/// Per-column mean and population std; zero-variance columns get std = 1.
NormStats zscore_fit(const Mat& x);
Mat zscore_apply(const NormStats& stats, const Mat& x);

bool all_finite(std::span<const double> v) noexcept;

}  // namespace dualgrad

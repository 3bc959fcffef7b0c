// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/numerics.hpp"

#include <cmath>
#include <string>

#include "dualgrad/errors.hpp"
#include "dualgrad/kernels.hpp"

namespace dualgrad {

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ArgumentError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  std::uint64_t x = parent ^ rotl(stream * 0xd1b54a32d192ed03ULL, 17);
  splitmix64(x);
  return splitmix64(x);
}

Rng::Rng(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  __uint128_t m = static_cast<__uint128_t>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<__uint128_t>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0, v = 0.0, s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

Vec matvec(const Mat& m, std::span<const double> v) {
  if (m.cols() != v.size()) {
    throw ArgumentError("matvec: matrix has " + std::to_string(m.cols()) + " columns, vector has " +
                        std::to_string(v.size()) + " entries");
  }
  Vec out(m.rows());
  kernels::matvec(kernels::ExecPolicy::parallel, m, v, out);
  return out;
}

Vec gauss_sample(Rng& rng, double mean, double std, std::size_t n) {
  if (!(std >= 0.0)) throw ArgumentError("gauss_sample: std must be >= 0");
  Vec out(n, mean);
  if (std == 0.0) return out;
  for (auto& x : out) x = mean + std * rng.normal();
  return out;
}

NormStats zscore_fit(const Mat& x) {
  if (x.rows() < 2) throw ArgumentError("zscore_fit: need at least 2 rows");
  const auto n = static_cast<double>(x.rows());
  NormStats stats{Vec(x.cols(), 0.0), Vec(x.cols(), 0.0)};
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) stats.means[c] += x(r, c);
  for (auto& m : stats.means) m /= n;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double d = x(r, c) - stats.means[c];
      stats.stds[c] += d * d;
    }
  for (auto& s : stats.stds) {
    s = std::sqrt(s / n);
    if (s == 0.0) s = 1.0;
  }
  return stats;
}

Mat zscore_apply(const NormStats& stats, const Mat& x) {
  if (stats.means.size() != x.cols() || stats.stds.size() != x.cols())
    throw ArgumentError("zscore_apply: stats cover " + std::to_string(stats.means.size()) +
                        " features, matrix has " + std::to_string(x.cols()));
  Mat out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - stats.means[c]) / stats.stds[c];
  return out;
}

bool all_finite(std::span<const double> v) noexcept {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace dualgrad

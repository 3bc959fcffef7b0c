// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include "dualgrad/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace dualgrad::kernels {

namespace {

inline double row_dot(std::span<const double> row, std::span<const double> v) noexcept {
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * v[j];
  return acc;
}

inline double row_diff_dot(std::span<const double> a, std::span<const double> b,
                           std::span<const double> v) noexcept {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]) * v[j];
  return acc;
}

}  // namespace

namespace serial {

void matvec(const Mat& m, std::span<const double> v, std::span<double> out) {
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = row_dot(m.row(i), v);
}

void matvec_diff(const Mat& a, const Mat& b, std::span<const double> v, std::span<double> out) {
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = row_diff_dot(a.row(i), b.row(i), v);
}

}  // namespace serial

namespace parallel {

void matvec(const Mat& m, std::span<const double> v, std::span<double> out) {
  const auto rows = static_cast<std::int64_t>(m.rows());
  const bool big = m.size() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t i = 0; i < rows; ++i) out[i] = row_dot(m.row(i), v);
}

void matvec_diff(const Mat& a, const Mat& b, std::span<const double> v, std::span<double> out) {
  const auto rows = static_cast<std::int64_t>(a.rows());
  const bool big = a.size() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::int64_t i = 0; i < rows; ++i) out[i] = row_diff_dot(a.row(i), b.row(i), v);
}

}  // namespace parallel

void matvec(ExecPolicy policy, const Mat& m, std::span<const double> v, std::span<double> out) {
  if (policy == ExecPolicy::parallel)
    parallel::matvec(m, v, out);
  else
    serial::matvec(m, v, out);
}

void matvec_diff(ExecPolicy policy, const Mat& a, const Mat& b, std::span<const double> v,
                 std::span<double> out) {
  if (policy == ExecPolicy::parallel)
    parallel::matvec_diff(a, b, v, out);
  else
    serial::matvec_diff(a, b, v, out);
}

void matvec_transposed(const Mat& m, std::span<const double> v, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += row[j] * v[i];
  }
}

void matvec_diff_transposed(const Mat& a, const Mat& b, std::span<const double> v,
                            std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += (ra[j] - rb[j]) * v[i];
  }
}

}  // namespace dualgrad::kernels

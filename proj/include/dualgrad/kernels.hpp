// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "dualgrad/numerics.hpp"

// Row kernels used by the forward pass and batch evaluation. Every parallel
// kernel splits work by output row only, so each output element is produced
// by the same sequence of floating-point operations as the serial reference
// and results agree bitwise.

namespace dualgrad::kernels {

enum class ExecPolicy { serial, parallel };

/// Below this many multiply-adds the parallel kernels run single-threaded.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

namespace serial {

/// out[i] = sum_j m(i,j) * v[j]
void matvec(const Mat& m, std::span<const double> v, std::span<double> out);
/// out[i] = sum_j (a(i,j) - b(i,j)) * v[j]
void matvec_diff(const Mat& a, const Mat& b, std::span<const double> v, std::span<double> out);

}  // namespace serial

namespace parallel {

void matvec(const Mat& m, std::span<const double> v, std::span<double> out);
void matvec_diff(const Mat& a, const Mat& b, std::span<const double> v, std::span<double> out);

}  // namespace parallel

/// Dispatches on policy; shapes are the caller's responsibility.
void matvec(ExecPolicy policy, const Mat& m, std::span<const double> v, std::span<double> out);
void matvec_diff(ExecPolicy policy, const Mat& a, const Mat& b, std::span<const double> v,
                 std::span<double> out);

/// out = m^T * v, used for backpropagating through a layer.
void matvec_transposed(const Mat& m, std::span<const double> v, std::span<double> out);
void matvec_diff_transposed(const Mat& a, const Mat& b, std::span<const double> v,
                            std::span<double> out);

}  // namespace dualgrad::kernels

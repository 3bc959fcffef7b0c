// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#include <omp.h>

#include "doctest.h"
#include "dualgrad/kernels.hpp"
#include "dualgrad/network.hpp"

using namespace dualgrad;
namespace k = dualgrad::kernels;

namespace {

Mat random_mat(Rng& rng, std::size_t r, std::size_t c) {
  Mat m(r, c);
  for (auto& v : m.data()) v = rng.uniform(-1, 1);
  return m;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("parallel matvec matches the serial reference bitwise") {
    Rng rng(4);
    // Large enough to cross the parallel threshold.
    const Mat m = random_mat(rng, 300, 400), m2 = random_mat(rng, 300, 400);
    Vec v(400);
    for (auto& x : v) x = rng.uniform(-1, 1);
    Vec a(300), b(300);
    omp_set_num_threads(4);
    k::serial::matvec(m, v, a);
    k::parallel::matvec(m, v, b);
    CHECK(a == b);
    k::serial::matvec_diff(m, m2, v, a);
    k::parallel::matvec_diff(m, m2, v, b);
    CHECK(a == b);
  }

  TEST_CASE("matvec_diff equals matvec of the collapsed matrix") {
    Rng rng(8);
    const Mat a = random_mat(rng, 7, 5), b = random_mat(rng, 7, 5);
    Mat d(7, 5);
    for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = a.data()[i] - b.data()[i];
    Vec v(5);
    for (auto& x : v) x = rng.uniform(-1, 1);
    Vec o1(7), o2(7);
    k::serial::matvec_diff(a, b, v, o1);
    k::serial::matvec(d, v, o2);
    CHECK(o1 == o2);
  }

  TEST_CASE("transposed kernels") {
    const Mat m{{1, 2, 3}, {4, 5, 6}};
    Vec out(3);
    k::matvec_transposed(m, Vec{1, -1}, out);
    CHECK(out == Vec{-3, -3, -3});
    k::matvec_diff_transposed(m, Mat(2, 3, 1.0), Vec{1, 1}, out);
    CHECK(out == Vec{3, 5, 7});
  }

  TEST_CASE("forward_rows parallel equals serial bitwise") {
    omp_set_num_threads(4);
    const std::size_t arch[] = {30, 64, 32, 5};
    const Network net = init_network(arch, Variant::dual, 12);
    Rng rng(2);
    const Mat xs = random_mat(rng, 257, 30);
    CHECK(forward_rows(net, xs, k::ExecPolicy::serial) == forward_rows(net, xs, k::ExecPolicy::parallel));
  }
}

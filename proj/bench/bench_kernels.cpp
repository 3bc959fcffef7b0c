// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "dualgrad/kernels.hpp"
#include "dualgrad/network.hpp"

using namespace dualgrad;
namespace k = dualgrad::kernels;

namespace {

Mat random_mat(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(r, c);
  for (auto& v : m.data()) v = rng.uniform(-1, 1);
  return m;
}

template <auto Kernel>
void bm_matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mat m = random_mat(n, n, 1);
  const Vec v(n, 0.5);
  Vec out(n);
  for (auto _ : state) {
    Kernel(m, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

template <auto Kernel>
void bm_matvec_diff(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mat a = random_mat(n, n, 1), b = random_mat(n, n, 2);
  const Vec v(n, 0.5);
  Vec out(n);
  for (auto _ : state) {
    Kernel(a, b, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void bm_forward_rows(benchmark::State& state, k::ExecPolicy policy) {
  const std::size_t arch[] = {784, 64, 32, 10};
  const Network net = init_network(arch, Variant::dual, 1);
  const Mat xs = random_mat(static_cast<std::size_t>(state.range(0)), 784, 3);
  for (auto _ : state) benchmark::DoNotOptimize(forward_rows(net, xs, policy));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(bm_matvec<k::serial::matvec>)->Name("matvec/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(bm_matvec<k::parallel::matvec>)->Name("matvec/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(bm_matvec_diff<k::serial::matvec_diff>)->Name("matvec_diff/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(bm_matvec_diff<k::parallel::matvec_diff>)->Name("matvec_diff/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK_CAPTURE(bm_forward_rows, serial, k::ExecPolicy::serial)->Arg(1000);
BENCHMARK_CAPTURE(bm_forward_rows, parallel, k::ExecPolicy::parallel)->Arg(1000);

BENCHMARK_MAIN();

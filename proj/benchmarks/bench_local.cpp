// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <benchmark/benchmark.h>

#include <random>

#include "nchodge/local_element.hpp"
#include "nchodge/verify.hpp"

using namespace nchodge;

// Exact shape space on a random simplex, all degrees k of dimension n.
static void BM_ShapeSpace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const auto t = random_simplex(n, rng);
  for (auto _ : state) {
    for (int k = 1; k < n; ++k) benchmark::DoNotOptimize(build_shape_space(n, k, t));
  }
}
BENCHMARK(BM_ShapeSpace)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_DofMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const ShapeSpace space = build_shape_space(n, 1, random_simplex(n, rng));
  const DofBasis dofs = build_dof_basis(space);
  for (auto _ : state) benchmark::DoNotOptimize(build_dof_matrix(space, dofs));
}
BENCHMARK(BM_DofMatrix)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

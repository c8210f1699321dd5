// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <benchmark/benchmark.h>

#include "nchodge/solver.hpp"

using namespace nchodge;

namespace {

std::shared_ptr<const Triangulation> square(int m) {
  return std::make_shared<const Triangulation>(generate_square_mesh(m, MeshPattern::kDiagonal));
}

}  // namespace

static void BM_ProductSpace(benchmark::State& state) {
  const auto tri = square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ProductSpace(tri));
}
BENCHMARK(BM_ProductSpace)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_GlobalBasis(benchmark::State& state) {
  const ProductSpace prod(square(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(build_global_basis(prod));
  state.counters["dofs"] = build_global_basis(prod).size();
}
BENCHMARK(BM_GlobalBasis)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
  const ProductSpace prod(square(static_cast<int>(state.range(0))));
  const GlobalBasis basis = build_global_basis(prod);
  const ExactSolution w = manufactured_solution();
  for (auto _ : state) benchmark::DoNotOptimize(assemble(prod, basis, w.forcing));
}
BENCHMARK(BM_Assemble)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SolveCg(benchmark::State& state) {
  const ProductSpace prod(square(static_cast<int>(state.range(0))));
  const GlobalBasis basis = build_global_basis(prod);
  const AssembledSystem sys = assemble(prod, basis, manufactured_solution().forcing);
  int iters = 0;
  for (auto _ : state) {
    const SolveResult r = solve_cg(sys);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.x.data());
  }
  state.counters["cg_iters"] = iters;
}
BENCHMARK(BM_SolveCg)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

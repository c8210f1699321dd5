// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <benchmark/benchmark.h>

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

// Linked against a core build with a flipped star sign for dx^1. The Aod
// identity must catch it; exits 0 only if it does.

#include <iostream>

#include "nchodge/verify.hpp"

int main() {
  nchodge::VerifyOptions options;
  nchodge::VerifyReport report;
  nchodge::verify_exterior_algebra(options, report);
  int caught = 0;
  for (const nchodge::CheckResult* c : report.select("aod")) {
    if (c->name != "aod") continue;
    std::cout << "aod n=" << c->n << " k=" << c->k << ": " << (c->passed ? "pass" : "FAIL") << '\n';
    caught += !c->passed;
  }
  if (caught == 0) {
    std::cout << "mutation survived the aod check\n";
    return 1;
  }
  std::cout << "mutation caught in " << caught << " (n, k) pairs\n";
  return 0;
}

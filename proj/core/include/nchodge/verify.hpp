// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// Self-checks of the exterior algebra and the local element, grouped per
// (n, k). Exact checks compare rational forms with zero tolerance; the
// randomized ones report the largest observed error.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nchodge/simplex.hpp"

namespace nchodge {

struct CheckResult {
  std::string name;
  int n = 0;
  int k = 0;
  bool passed = true;
  int cases = 0;
  double max_error = 0.0;  // 0 for exact checks that passed
  double tolerance = 0.0;
  std::string detail;  // first failure, if any
};

struct VerifyOptions {
  int min_dim = 2;
  int max_dim = 4;
  std::uint64_t seed = 20240601;
  int samples = 3;             // random forms per exact check
  int energy_simplices = 100;  // per (n, k), n <= 3
  int unisolvence_triangles = 1000;
  double energy_tol = 1e-12;
  double projection_tol = 1e-10;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double wall_ms = 0.0;

  bool passed() const;
  /// Checks whose name starts with the prefix.
  std::vector<const CheckResult*> select(const std::string& prefix) const;
};

/// Positively oriented simplex near the reference one with shape ratio below
/// max_ratio, vertices scaled by `scale`.
std::shared_ptr<const Simplex> random_simplex(int n, std::mt19937_64& rng, double scale = 1.0,
                                              double max_ratio = 12.0);

/// d d = 0, delta delta = 0, star star, d kappa and delta star kappa star
/// scalings, and the H2 identities for both codifferential conventions.
void verify_exterior_algebra(const VerifyOptions& options, VerifyReport& report);
/// ||d mu|| = sqrt(k + 1) |mu|_{H^1} for mu in kappa(P0 Lambda^{k+1}), n <= 3.
void verify_koszul_energy(const VerifyOptions& options, VerifyReport& report);
/// Exact unisolvence and projection for every (n, k); condition numbers,
/// floating projection and FOURSTEP = DIRECT on random triangles.
void verify_unisolvence(const VerifyOptions& options, VerifyReport& report);

VerifyReport run_verify(const VerifyOptions& options = {});

/// {"passed": bool, "wall_ms": t, "counts": {"n=2,k=1": {"passed": p, "total": t}, ...},
///  "checks": [...]}
void write_verify_json(const VerifyReport& report, std::ostream& out);

}  // namespace nchodge

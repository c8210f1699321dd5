// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// Convergence studies over a refinement family: interpolation error of the
// global interpolant and discretization error of the Galerkin solution.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nchodge/solver.hpp"

namespace nchodge {

/// Either the unit-square generator (refinement m = squares per side) or a
/// mesh file (refinement m = uniform subdivision factor).
struct MeshSource {
  std::optional<std::string> file;
  MeshPattern pattern = MeshPattern::kDiagonal;
};

std::shared_ptr<const Triangulation> make_mesh(const MeshSource& source, int m);

struct StudyOptions {
  MeshSource mesh;
  std::vector<int> refinements{2, 4, 8, 16};
  int quad_order = kDefaultQuadratureOrder;  // loads and error norms
  int dof_quad_order = 14;                   // DOFs of the interpolant
  double tol = 1e-10;
  int max_iter = 0;
  bool oracle = true;
  int oracle_max_m = 4;
};

struct StudyRow {
  int mesh_m = 0;
  double h = 0.0;
  int dofs = 0;
  ErrorNorms err;
  double wall_ms = 0.0;
  double constraint_residual = 0.0;  // max |B x| of the product vector

  // Solver runs only.
  int cg_iters = -1;
  bool used_direct = false;
  double relative_residual = 0.0;
  double symmetry = 0.0;    // ||A - A^T|| / ||A||
  double oracle_diff = -1;  // max |x_oracle - Phi x| / max(1, |x_oracle|); -1 if not run
};

struct StudyResult {
  bool solver = false;
  std::vector<StudyRow> rows;
  double l2_rate = 0.0;
  double rot_rate = 0.0;
  double div_rate = 0.0;
  double energy_rate = 0.0;
  double wall_ms = 0.0;
};

/// Least-squares slope of log(err) against log(h); NaN with fewer than two
/// usable points.
double fitted_rate(const std::vector<double>& h, const std::vector<double>& err);

StudyResult interpolation_study(const StudyOptions& options, const ExactSolution& exact = manufactured_solution());
StudyResult solve_study(const StudyOptions& options, const ExactSolution& exact = manufactured_solution());

/// mesh_m,h,dofs,l2_err,rot_err,div_err,energy_err[,cg_iters],wall_ms
void write_csv(const StudyResult& result, std::ostream& out);

}  // namespace nchodge

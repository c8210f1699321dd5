// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// Assembly and solution of the discrete problem
//   <d w, d v> + <delta w, delta v> + <w, v> = <f, v>  for all v in V_h
// in the locally supported basis, plus the saddle-point oracle and error norms.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "nchodge/global_space.hpp"

namespace nchodge {

/// A smooth 1-form on the plane with its rot (the dx12 coefficient of d w) and
/// divergence. delta w = -div w in the adjoint convention.
struct ExactSolution {
  FormField value;
  FormField rot;
  FormField div;
  FormField forcing;  // curl rot w - grad div w + w, when known
};

/// w = (sin(pi x) cos(pi y), -2 cos(pi x) sin(pi y)) on the unit square.
/// Both the normal trace and rot w = 3 pi sin(pi x) sin(pi y) vanish on the
/// boundary, so w solves the weak problem with f = -Laplace w + w = (1 + 2 pi^2) w.
ExactSolution manufactured_solution();

SmoothForm as_smooth_form(const ExactSolution& w);

/// Block-diagonal product-space matrix of the broken bilinear form.
SparseMatrix assemble_cell_operator(const ProductSpace& prod);

/// Product vector of <f, mu_j>_T by quadrature.
Eigen::VectorXd assemble_load(const ProductSpace& prod, const FormField& f, int quad_order = kDefaultQuadratureOrder);

struct AssembledSystem {
  SparseMatrix a;  // Phi^T A_cell Phi
  Eigen::VectorXd b;
  SparseMatrix a_cell;
  Eigen::VectorXd load;  // product-space load
  double assembly_ms = 0.0;
};

AssembledSystem assemble(const ProductSpace& prod, const GlobalBasis& basis, const FormField& f,
                         int quad_order = kDefaultQuadratureOrder);

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 0;  // 0: 10 * dimension
  /// Below this dimension a dense Cholesky solve replaces a CG run that did not converge.
  int direct_fallback_limit = 2000;
};

struct SolveResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> residual_history;
  bool used_direct = false;
  double wall_ms = 0.0;
};

/// Jacobi-preconditioned CG. Throws NumericalError (carrying the residual
/// history) when it does not converge and the system is too large for the
/// dense fallback.
SolveResult solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b, const CgOptions& options = {});
SolveResult solve_cg(const AssembledSystem& sys, const CgOptions& options = {});

/// Dense LDLT; throws NumericalError if the matrix is not positive definite.
Eigen::VectorXd solve_direct(const SparseMatrix& a, const Eigen::VectorXd& b);

/// Solves [[A_cell, B^T], [B, 0]] [x; lambda] = [load; 0] by sparse LU and returns x.
Eigen::VectorXd solve_oracle(const ProductSpace& prod, const ConstraintSystem& cons, const FormField& f,
                             int quad_order = kDefaultQuadratureOrder);

struct ErrorNorms {
  double l2 = 0.0;
  double rot = 0.0;  // broken
  double div = 0.0;  // broken
  double energy = 0.0;
};

/// Cellwise quadrature of the squared differences between a product vector
/// and an exact solution (rot/div callbacks may be empty, meaning zero).
ErrorNorms error_norms(const ProductSpace& prod, const Eigen::VectorXd& product_coefficients,
                       const ExactSolution& exact, int quad_order = kDefaultQuadratureOrder);

}  // namespace nchodge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// The enriched local element on one simplex: shape space, DOF functionals and
// the projective interpolator.

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "nchodge/forms.hpp"
#include "nchodge/simplex.hpp"

namespace nchodge {

/// sum_j [(x~^{beta_j})^2 - c^{beta_j}] dx^alpha with beta = complement(alpha).
/// Requires 1 <= |alpha| <= n - 1.
PolyForm build_h2d_form(const MultiIndex& alpha, const Simplex& t);
/// sum_j [(x~^{alpha_j})^2 - c^{alpha_j}] dx^alpha. Same degree range.
PolyForm build_h2delta_form(const MultiIndex& alpha, const Simplex& t);

enum class ShapeBlock { kP0, kKappa, kStarKappa, kH2d };

const char* to_string(ShapeBlock block);

/// P0 + kappa_T(P0 Lambda^{k+1}) + star kappa_T star(P0 Lambda^{k-1}) + H2_d,
/// blocks in that order, lexicographic inside each block.
class ShapeSpace {
 public:
  ShapeSpace(int k, std::shared_ptr<const Simplex> simplex);

  int ambient() const noexcept { return simplex_->dimension(); }
  int degree() const noexcept { return k_; }
  const Simplex& simplex() const noexcept { return *simplex_; }
  const std::shared_ptr<const Simplex>& simplex_ptr() const noexcept { return simplex_; }

  int dimension() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<PolyForm>& basis() const noexcept { return basis_; }
  const PolyForm& operator[](int i) const { return basis_.at(static_cast<std::size_t>(i)); }
  ShapeBlock block_of(int i) const { return blocks_.at(static_cast<std::size_t>(i)); }
  /// First index and size of a block.
  std::pair<int, int> block_range(ShapeBlock block) const;

  PolyForm combine(const std::vector<Rational>& coefficients) const;
  /// Floating coefficients are converted exactly before combining.
  PolyForm combine(const Eigen::VectorXd& coefficients) const;

 private:
  int k_;
  std::shared_ptr<const Simplex> simplex_;
  std::vector<PolyForm> basis_;
  std::vector<ShapeBlock> blocks_;
};

ShapeSpace build_shape_space(int n, int k, const Simplex& t);
ShapeSpace build_shape_space(int n, int k, std::shared_ptr<const Simplex> t);

/// The test forms of the DOF functionals. eta spans P0 Lambda^{k+1} +
/// star kappa star(P0 Lambda^k); tau spans P0 Lambda^{k-1} + kappa(P0 Lambda^k).
struct DofBasis {
  std::vector<PolyForm> eta;
  std::vector<PolyForm> tau;
  int eta_constant = 0;  // leading constant tests in eta
  int tau_constant = 0;  // leading constant tests in tau
  Rational kappa_scale = 1;  // factor applied to the kappa-type tests

  int size() const noexcept { return static_cast<int>(eta.size() + tau.size()); }
};

/// With scaled = true the kappa-type tests are divided by h_T (as a rational
/// read off the floating diameter), which keeps the DOF matrix conditioning
/// independent of the cell size.
DofBasis build_dof_basis(const ShapeSpace& space, bool scaled = false);

/// D[functional][shape function], eta rows first.
struct DofMatrix {
  std::vector<std::vector<Rational>> exact;
  Eigen::MatrixXd values;
};

DofMatrix build_dof_matrix(const ShapeSpace& space, const DofBasis& dofs);

/// <d mu, eta> - <mu, delta eta> for every eta, then <delta mu, tau> - <mu, d tau>.
std::vector<Rational> dof_values(const PolyForm& mu, const ShapeSpace& space, const DofBasis& dofs);

/// A smooth k-form given pointwise at physical points, together with its
/// exterior derivative and (adjoint-convention) codifferential. Components are
/// in lexicographic multi-index order.
struct SmoothForm {
  int ambient = 0;
  int degree = 0;
  FormField value;
  FormField d;
  FormField delta;
};

/// Quadrature path; throws DomainError when derivative data is missing.
Eigen::VectorXd dof_values(const SmoothForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                           int quad_order = kDefaultQuadratureOrder);

enum class InterpolationMethod { kDirect, kFourStep };

/// Coefficients in the shape basis of the unique element sharing all DOF values.
std::vector<Rational> interpolate_exact(const PolyForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                                        InterpolationMethod method = InterpolationMethod::kDirect);
Eigen::VectorXd interpolate_coefficients(const SmoothForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                                         InterpolationMethod method = InterpolationMethod::kDirect,
                                         int quad_order = kDefaultQuadratureOrder);

PolyForm interpolate(const PolyForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                     InterpolationMethod method = InterpolationMethod::kDirect);
PolyForm interpolate(const SmoothForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                     InterpolationMethod method = InterpolationMethod::kDirect,
                     int quad_order = kDefaultQuadratureOrder);

/// Solves D c = values either directly or block by block in the constructive
/// order (tau constants -> star-kappa block, tau kappa-tests -> P0, eta
/// constants -> kappa block, eta star-kappa tests -> H2_d).
std::vector<Rational> solve_dofs(const DofMatrix& dm, const ShapeSpace& space, const DofBasis& dofs,
                                 const std::vector<Rational>& values, InterpolationMethod method);
Eigen::VectorXd solve_dofs(const DofMatrix& dm, const ShapeSpace& space, const DofBasis& dofs,
                           const Eigen::VectorXd& values, InterpolationMethod method);

/// Componentwise evaluation of a polynomial form at a physical point.
std::vector<double> evaluate(const PolyForm& w, const Simplex& t, std::span<const double> x);

}  // namespace nchodge

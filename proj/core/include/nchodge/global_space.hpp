// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// The 2D nonconforming space: product of the cell shape spaces cut down by the
// weak rot/div continuity constraints, and its locally supported basis.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nchodge/local_element.hpp"
#include "nchodge/mesh.hpp"

namespace nchodge {

using SparseMatrix = Eigen::SparseMatrix<double>;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Per-cell shape spaces of 1-forms on a 2D mesh. Global coefficients are
/// cell-major, kLocalDim per cell.
class ProductSpace {
 public:
  static constexpr int kLocalDim = 6;

  explicit ProductSpace(std::shared_ptr<const Triangulation> tri);

  const Triangulation& mesh() const noexcept { return *tri_; }
  const std::shared_ptr<const Triangulation>& mesh_ptr() const noexcept { return tri_; }
  int num_cells() const noexcept { return static_cast<int>(spaces_.size()); }
  int dimension() const noexcept { return kLocalDim * num_cells(); }
  int offset(int c) const noexcept { return kLocalDim * c; }

  const ShapeSpace& cell_space(int c) const { return spaces_.at(static_cast<std::size_t>(c)); }
  const Simplex& simplex(int c) const { return cell_space(c).simplex(); }

  /// Constraint functionals of the six shape functions of cell c, rows
  /// [rot vs phi_{a_0..a_2} dx12, div vs phi_{a_0..a_2}] in the cell's vertex order:
  /// rot row: <d mu, phi_a dx12> - <mu, delta(phi_a dx12)>; div row: <delta mu, phi_a> - <mu, d phi_a>.
  const RationalMatrix& functional_matrix(int c) const { return functionals_.at(static_cast<std::size_t>(c)); }

  /// The restriction of a product vector to cell c as a polynomial form.
  PolyForm cell_form(int c, const Eigen::VectorXd& coefficients) const;

 private:
  std::shared_ptr<const Triangulation> tri_;
  std::vector<ShapeSpace> spaces_;
  std::vector<RationalMatrix> functionals_;
};

/// B_div: one row per vertex (V1_h), B_rot: one row per interior vertex
/// (V1_h0 dx12). Columns are product coefficients.
struct ConstraintSystem {
  SparseMatrix b_div;
  SparseMatrix b_rot;
  WhitneySpace div_space;
  WhitneySpace rot_space;

  /// [B_div; B_rot].
  SparseMatrix stacked() const;
};

ConstraintSystem build_constraints(const ProductSpace& prod);

/// Six shape-basis coefficient columns per cell: mu^rot_{a_i} (i = 0..2) then
/// mu^div_{a_i}, biorthogonal to the functional matrix rows.
struct DualLocalFunctions {
  RationalMatrix coefficients;  // 6 x 6, column j is function j
  std::array<int, 3> vertices;  // a_0, a_1, a_2

  Eigen::VectorXd rot(int i) const { return column(i); }
  Eigen::VectorXd div(int i) const { return column(3 + i); }
  Eigen::VectorXd column(int j) const;
};

DualLocalFunctions build_dual_local_functions(const ProductSpace& prod, int c);

enum class BasisCategory { kDivPatch, kRotPatch, kRotCell };

const char* to_string(BasisCategory category);

struct BasisFunction {
  BasisCategory category;
  int anchor;              // vertex
  std::vector<int> cells;  // support
  std::vector<std::pair<int, double>> coefficients;  // product index -> value
};

class GlobalBasis {
 public:
  GlobalBasis(std::vector<BasisFunction> functions, int product_dimension);

  int size() const noexcept { return static_cast<int>(functions_.size()); }
  const std::vector<BasisFunction>& functions() const noexcept { return functions_; }
  const BasisFunction& operator[](int i) const { return functions_.at(static_cast<std::size_t>(i)); }
  /// Basis-to-product map Phi (product dimension x size()).
  const SparseMatrix& to_product() const noexcept { return phi_; }
  int count(BasisCategory category) const;

 private:
  std::vector<BasisFunction> functions_;
  SparseMatrix phi_;
};

/// DIV_PATCH: consecutive fan differences of mu^div at every vertex.
/// ROT_PATCH: the same with mu^rot at interior vertices.
/// ROT_CELL: mu^rot_{b,T} for every boundary vertex b of T; these carry no
/// constraint because boundary vertices have no rot test function.
GlobalBasis build_global_basis(const ProductSpace& prod);

/// Numerical rank by the eigenvalues of B B^T (relative tolerance).
int numerical_rank(const SparseMatrix& b, double rel_tol = 1e-10);

/// Cellwise interpolation of a smooth 1-form (scaled DOFs, DIRECT solve).
Eigen::VectorXd global_interpolate(const SmoothForm& mu, const ProductSpace& prod,
                                   int quad_order = kDefaultQuadratureOrder);

/// JSON lines {category, anchor, cells, coefficients: [[index, value], ...]}.
void write_basis_jsonl(const GlobalBasis& basis, std::ostream& out);

}  // namespace nchodge

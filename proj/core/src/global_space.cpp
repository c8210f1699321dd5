// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/global_space.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"

#include "dense.hpp"
#include "nchodge/error.hpp"

namespace nchodge {

namespace {

using Triplet = Eigen::Triplet<double>;

constexpr int kRotRow = 0;
constexpr int kDivRow = 3;

}  // namespace

ProductSpace::ProductSpace(std::shared_ptr<const Triangulation> tri) : tri_(std::move(tri)) {
  if (!tri_) throw DomainError("product space needs a mesh");
  const auto simplices = build_cell_simplices(*tri_);
  spaces_.reserve(simplices.size());
  functionals_.reserve(simplices.size());
  for (int c = 0; c < tri_->num_cells(); ++c) {
    const auto& t = simplices[static_cast<std::size_t>(c)];
    spaces_.push_back(build_shape_space(2, 1, t));
    const ShapeSpace& s = spaces_.back();
    RationalMatrix g(kLocalDim, std::vector<Rational>(kLocalDim));
    for (int i = 0; i < 3; ++i) {
      const int a = tri_->cell(c)[static_cast<std::size_t>(i)];
      const PolyForm eta = whitney_volume_form(*tri_, c, *t, a);
      const PolyForm delta_eta = codifferential(eta);
      const PolyForm tau = whitney_zero_form(*tri_, c, *t, a);
      const PolyForm d_tau = exterior_derivative(tau);
      for (int j = 0; j < kLocalDim; ++j) {
        const PolyForm& mu = s[j];
        g[static_cast<std::size_t>(kRotRow + i)][static_cast<std::size_t>(j)] =
            l2_inner_exact(exterior_derivative(mu), eta, *t) - l2_inner_exact(mu, delta_eta, *t);
        g[static_cast<std::size_t>(kDivRow + i)][static_cast<std::size_t>(j)] =
            l2_inner_exact(codifferential(mu), tau, *t) - l2_inner_exact(mu, d_tau, *t);
      }
    }
    functionals_.push_back(std::move(g));
  }
}

PolyForm ProductSpace::cell_form(int c, const Eigen::VectorXd& coefficients) const {
  return cell_space(c).combine(Eigen::VectorXd(coefficients.segment(offset(c), kLocalDim)));
}

SparseMatrix ConstraintSystem::stacked() const {
  SparseMatrix out(b_div.rows() + b_rot.rows(), b_div.cols());
  std::vector<Triplet> t;
  for (int k = 0; k < b_div.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(b_div, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int k = 0; k < b_rot.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(b_rot, k); it; ++it) {
      t.emplace_back(b_div.rows() + it.row(), it.col(), it.value());
    }
  }
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

ConstraintSystem build_constraints(const ProductSpace& prod) {
  const Triangulation& tri = prod.mesh();
  ConstraintSystem cs{SparseMatrix(), SparseMatrix(), whitney_basis(tri, WhitneyKind::kLagrangeFull),
                      whitney_basis(tri, WhitneyKind::kLagrangeZero)};
  std::vector<Triplet> div, rot;
  for (int c = 0; c < prod.num_cells(); ++c) {
    const RationalMatrix& g = prod.functional_matrix(c);
    for (int i = 0; i < 3; ++i) {
      const int a = tri.cell(c)[static_cast<std::size_t>(i)];
      const int div_row = cs.div_space.dof_index(a);
      const int rot_row = cs.rot_space.dof_index(a);
      for (int j = 0; j < ProductSpace::kLocalDim; ++j) {
        const int col = prod.offset(c) + j;
        const Rational& dv = g[static_cast<std::size_t>(kDivRow + i)][static_cast<std::size_t>(j)];
        const Rational& rv = g[static_cast<std::size_t>(kRotRow + i)][static_cast<std::size_t>(j)];
        if (div_row >= 0 && dv != 0) div.emplace_back(div_row, col, dv.get_d());
        if (rot_row >= 0 && rv != 0) rot.emplace_back(rot_row, col, rv.get_d());
      }
    }
  }
  cs.b_div.resize(cs.div_space.size(), prod.dimension());
  cs.b_div.setFromTriplets(div.begin(), div.end());
  cs.b_rot.resize(cs.rot_space.size(), prod.dimension());
  cs.b_rot.setFromTriplets(rot.begin(), rot.end());
  return cs;
}

Eigen::VectorXd DualLocalFunctions::column(int j) const {
  Eigen::VectorXd v(ProductSpace::kLocalDim);
  for (int i = 0; i < ProductSpace::kLocalDim; ++i) {
    v[i] = coefficients[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
  }
  return v;
}

DualLocalFunctions build_dual_local_functions(const ProductSpace& prod, int c) {
  DualLocalFunctions out;
  out.coefficients = detail::solve(prod.functional_matrix(c), detail::identity<Rational>(ProductSpace::kLocalDim));
  out.vertices = prod.mesh().cell(c);
  return out;
}

const char* to_string(BasisCategory category) {
  switch (category) {
    case BasisCategory::kDivPatch: return "DIV_PATCH";
    case BasisCategory::kRotPatch: return "ROT_PATCH";
    case BasisCategory::kRotCell: return "ROT_CELL";
  }
  return "?";
}

GlobalBasis::GlobalBasis(std::vector<BasisFunction> functions, int product_dimension)
    : functions_(std::move(functions)), phi_(product_dimension, static_cast<Eigen::Index>(functions_.size())) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < functions_.size(); ++j) {
    for (const auto& [row, value] : functions_[j].coefficients) t.emplace_back(row, static_cast<int>(j), value);
  }
  phi_.setFromTriplets(t.begin(), t.end());
}

int GlobalBasis::count(BasisCategory category) const {
  return static_cast<int>(std::count_if(functions_.begin(), functions_.end(),
                                        [&](const BasisFunction& f) { return f.category == category; }));
}

GlobalBasis build_global_basis(const ProductSpace& prod) {
  const Triangulation& tri = prod.mesh();
  std::vector<DualLocalFunctions> duals;
  duals.reserve(static_cast<std::size_t>(prod.num_cells()));
  for (int c = 0; c < prod.num_cells(); ++c) duals.push_back(build_dual_local_functions(prod, c));

  auto append = [&](std::vector<std::pair<int, double>>& coeffs, int c, const Eigen::VectorXd& local, double sign) {
    for (int i = 0; i < ProductSpace::kLocalDim; ++i) {
      if (local[i] != 0.0) coeffs.emplace_back(prod.offset(c) + i, sign * local[i]);
    }
  };
  // Column of mu^{rot or div}_{a,T} in the cell's dual table.
  auto dual_column = [&](int c, int a, int base) {
    const int i = tri.local_index(c, a);
    return duals[static_cast<std::size_t>(c)].column(base + i);
  };

  std::vector<BasisFunction> out;
  auto patch_functions = [&](int a, BasisCategory category, int base) {
    const auto& fan = tri.patch(a);
    for (std::size_t i = 0; i + 1 < fan.size(); ++i) {
      BasisFunction f{category, a, {fan[i], fan[i + 1]}, {}};
      append(f.coefficients, fan[i], dual_column(fan[i], a, base), 1.0);
      append(f.coefficients, fan[i + 1], dual_column(fan[i + 1], a, base), -1.0);
      out.push_back(std::move(f));
    }
  };
  for (int a = 0; a < tri.num_vertices(); ++a) patch_functions(a, BasisCategory::kDivPatch, 3);
  for (int a = 0; a < tri.num_vertices(); ++a) {
    if (tri.is_interior(a)) patch_functions(a, BasisCategory::kRotPatch, 0);
  }
  for (int c = 0; c < prod.num_cells(); ++c) {
    for (int b : tri.cell(c)) {
      if (tri.is_interior(b)) continue;
      BasisFunction f{BasisCategory::kRotCell, b, {c}, {}};
      append(f.coefficients, c, dual_column(c, b, 0), 1.0);
      out.push_back(std::move(f));
    }
  }
  return GlobalBasis(std::move(out), prod.dimension());
}

int numerical_rank(const SparseMatrix& b, double rel_tol) {
  if (b.rows() == 0) return 0;
  const Eigen::MatrixXd bbt = Eigen::MatrixXd(b * b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bbt, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  // Eigenvalues of B B^T are squared singular values.
  return static_cast<int>((ev.array() > rel_tol * rel_tol * top).count());
}

Eigen::VectorXd global_interpolate(const SmoothForm& mu, const ProductSpace& prod, int quad_order) {
  Eigen::VectorXd out(prod.dimension());
  for (int c = 0; c < prod.num_cells(); ++c) {
    const ShapeSpace& s = prod.cell_space(c);
    const DofBasis dofs = build_dof_basis(s, true);
    out.segment(prod.offset(c), ProductSpace::kLocalDim) =
        interpolate_coefficients(mu, s, dofs, InterpolationMethod::kDirect, quad_order);
  }
  return out;
}

void write_basis_jsonl(const GlobalBasis& basis, std::ostream& out) {
  for (const BasisFunction& f : basis.functions()) {
    nlohmann::ordered_json j;
    j["category"] = to_string(f.category);
    j["anchor"] = f.anchor;
    j["cells"] = f.cells;
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (const auto& [index, value] : f.coefficients) coeffs.push_back({index, value});
    j["coefficients"] = std::move(coeffs);
    out << j.dump() << '\n';
  }
}

}  // namespace nchodge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "nchodge/global_space.hpp"
#include "nchodge/solver.hpp"

using namespace nchodge;

namespace {

std::shared_ptr<const Triangulation> square(int m, MeshPattern p = MeshPattern::kDiagonal) {
  return std::make_shared<const Triangulation>(generate_square_mesh(m, p));
}

double max_abs(const SparseMatrix& a) {
  double out = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) out = std::max(out, std::abs(it.value()));
  }
  return out;
}

int dense_rank(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd s = svd.singularValues();
  return static_cast<int>((s.array() > 1e-10 * s[0]).count());
}

}  // namespace

TEST(ProductSpace, DimensionAndOffsets) {
  const ProductSpace prod(square(2));
  EXPECT_EQ(prod.num_cells(), 8);
  EXPECT_EQ(prod.dimension(), 48);
  EXPECT_EQ(prod.offset(3), 18);
}

TEST(Constraints, ConstantFormOnlyHitsBoundaryDivRows) {
  // dx1 lies in every cell space (first P0 function), so rot rows and interior
  // div rows vanish; boundary div rows pick up the normal flux on x = 0 and x = 1.
  auto tri = square(4);
  const ProductSpace prod(tri);
  const ConstraintSystem cons = build_constraints(prod);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(prod.dimension());
  for (int c = 0; c < prod.num_cells(); ++c) x[prod.offset(c)] = 1.0;
  const Eigen::VectorXd rot = cons.b_rot * x;
  EXPECT_LT(rot.cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::VectorXd div = cons.b_div * x;
  for (int v = 0; v < tri->num_vertices(); ++v) {
    const double r = div[cons.div_space.dof_index(v)];
    const Point2& p = tri->vertex(v);
    const bool side = p[0] == 0.0 || p[0] == 1.0;
    if (side) {
      EXPECT_GT(std::abs(r), 1e-3) << "vertex " << v;
    } else {
      EXPECT_LT(std::abs(r), 1e-14) << "vertex " << v;
    }
  }
}

TEST(Constraints, RowCountsAndRank) {
  for (int m : {2, 4}) {
    auto tri = square(m);
    const ProductSpace prod(tri);
    const ConstraintSystem cons = build_constraints(prod);
    EXPECT_EQ(cons.b_div.rows(), tri->num_vertices());
    EXPECT_EQ(cons.b_rot.rows(), tri->num_interior_vertices());
    EXPECT_EQ(numerical_rank(cons.stacked()), tri->num_vertices() + tri->num_interior_vertices()) << "m=" << m;
  }
}

TEST(Constraints, InterpolantIsMember) {
  const SmoothForm w = as_smooth_form(manufactured_solution());
  for (int m : {2, 4, 8}) {
    const ProductSpace prod(square(m));
    const ConstraintSystem cons = build_constraints(prod);
    const Eigen::VectorXd x = global_interpolate(w, prod, 14);
    EXPECT_LT((cons.stacked() * x).cwiseAbs().maxCoeff(), 1e-9) << "m=" << m;
  }
}

TEST(DualFunctions, BiorthogonalToFunctionals) {
  const ProductSpace prod(square(2, MeshPattern::kCrissCross));
  for (int c = 0; c < prod.num_cells(); ++c) {
    const DualLocalFunctions dual = build_dual_local_functions(prod, c);
    const RationalMatrix& g = prod.functional_matrix(c);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        Rational s = 0;
        for (int k = 0; k < 6; ++k) {
          s += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
               dual.coefficients[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        }
        EXPECT_EQ(s, Rational(i == j ? 1 : 0));
      }
    }
  }
}

TEST(GlobalBasis, CountMatchesRankNullity) {
  for (auto [m, p] : {std::pair{2, MeshPattern::kDiagonal}, std::pair{4, MeshPattern::kDiagonal},
                      std::pair{2, MeshPattern::kCrissCross}}) {
    const ProductSpace prod(square(m, p));
    const ConstraintSystem cons = build_constraints(prod);
    const GlobalBasis basis = build_global_basis(prod);
    EXPECT_EQ(basis.size(), prod.dimension() - numerical_rank(cons.stacked()));
    EXPECT_LT(max_abs(SparseMatrix(cons.stacked() * basis.to_product())), 1e-12);
    EXPECT_EQ(dense_rank(Eigen::MatrixXd(basis.to_product())), basis.size());
  }
}

TEST(GlobalBasis, SupportsAndCategories) {
  auto tri = square(4);
  const GlobalBasis basis = build_global_basis(ProductSpace(tri));
  std::map<std::pair<BasisCategory, int>, int> per_anchor;
  for (const BasisFunction& f : basis.functions()) {
    EXPECT_TRUE(f.cells.size() == 1 || f.cells.size() == 2);
    if (f.category == BasisCategory::kRotCell) {
      EXPECT_EQ(f.cells.size(), 1u);
      EXPECT_FALSE(tri->is_interior(f.anchor));
    } else {
      EXPECT_EQ(f.cells.size(), 2u);
    }
    if (f.category == BasisCategory::kRotPatch) EXPECT_TRUE(tri->is_interior(f.anchor));
    for (const auto& [index, value] : f.coefficients) {
      const int c = index / ProductSpace::kLocalDim;
      EXPECT_NE(std::find(f.cells.begin(), f.cells.end(), c), f.cells.end());
      (void)value;
    }
    ++per_anchor[{f.category, f.anchor}];
  }
  for (int v = 0; v < tri->num_vertices(); ++v) {
    const int d = static_cast<int>(tri->patch(v).size());
    EXPECT_EQ((per_anchor[{BasisCategory::kDivPatch, v}]), d - 1);
    EXPECT_EQ((per_anchor[{BasisCategory::kRotPatch, v}]), tri->is_interior(v) ? d - 1 : 0);
  }
}

TEST(GlobalBasis, DegreeSixVertex) {
  auto tri = square(4);
  int centre = -1;
  for (int v = 0; v < tri->num_vertices() && centre < 0; ++v) {
    if (tri->is_interior(v) && tri->patch(v).size() == 6) centre = v;
  }
  ASSERT_GE(centre, 0);
  const GlobalBasis basis = build_global_basis(ProductSpace(tri));
  int rot = 0, div = 0;
  for (const BasisFunction& f : basis.functions()) {
    if (f.anchor != centre) continue;
    rot += f.category == BasisCategory::kRotPatch;
    div += f.category == BasisCategory::kDivPatch;
  }
  EXPECT_EQ(rot, 5);
  EXPECT_EQ(div, 5);
}

TEST(GlobalBasis, JsonLines) {
  const GlobalBasis basis = build_global_basis(ProductSpace(square(2)));
  std::ostringstream out;
  write_basis_jsonl(basis, out);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  std::set<std::string> categories;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const BasisFunction& f = basis[n];
    EXPECT_EQ(j.at("category").get<std::string>(), to_string(f.category));
    EXPECT_EQ(j.at("anchor").get<int>(), f.anchor);
    EXPECT_EQ(j.at("cells").get<std::vector<int>>(), f.cells);
    EXPECT_EQ(j.at("coefficients").size(), f.coefficients.size());
    categories.insert(j.at("category").get<std::string>());
    ++n;
  }
  EXPECT_EQ(n, basis.size());
  EXPECT_EQ(categories, (std::set<std::string>{"DIV_PATCH", "ROT_PATCH", "ROT_CELL"}));
}

TEST(GlobalInterpolate, ReproducesShapeFunctionsOnOneCell) {
  auto tri = std::make_shared<const Triangulation>(std::vector<Point2>{{0.1, 0.0}, {1.0, 0.2}, {0.3, 0.9}},
                                                   std::vector<Cell>{{0, 1, 2}});
  const ProductSpace prod(tri);
  const ShapeSpace& s = prod.cell_space(0);
  for (int i = 0; i < ProductSpace::kLocalDim; ++i) {
    const PolyForm mu = s[i];
    const PolyForm dmu = exterior_derivative(mu), smu = codifferential(mu);
    const Simplex& t = s.simplex();
    SmoothForm f{2, 1, [&](std::span<const double> x) { return evaluate(mu, t, x); },
                 [&](std::span<const double> x) { return evaluate(dmu, t, x); },
                 [&](std::span<const double> x) { return evaluate(smu, t, x); }};
    const Eigen::VectorXd c = global_interpolate(f, prod, 10);
    for (int j = 0; j < ProductSpace::kLocalDim; ++j) EXPECT_NEAR(c[j], i == j ? 1.0 : 0.0, 1e-10);
  }
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nchodge/error.hpp"
#include "nchodge/solver.hpp"

using namespace nchodge;

namespace {

struct Problem {
  std::shared_ptr<const Triangulation> tri;
  std::unique_ptr<ProductSpace> prod;
  std::unique_ptr<GlobalBasis> basis;
  AssembledSystem sys;
};

Problem make_problem(int m, const FormField& f, MeshPattern p = MeshPattern::kDiagonal) {
  Problem out;
  out.tri = std::make_shared<const Triangulation>(generate_square_mesh(m, p));
  out.prod = std::make_unique<ProductSpace>(out.tri);
  out.basis = std::make_unique<GlobalBasis>(build_global_basis(*out.prod));
  out.sys = assemble(*out.prod, *out.basis, f);
  return out;
}

// Central differences of the manufactured field.
double partial(const FormField& f, int comp, int dir, double x, double y) {
  const double e = 1e-5;
  std::array<double, 2> a{x, y}, b{x, y};
  a[static_cast<std::size_t>(dir)] += e;
  b[static_cast<std::size_t>(dir)] -= e;
  return (f(a)[static_cast<std::size_t>(comp)] - f(b)[static_cast<std::size_t>(comp)]) / (2 * e);
}

}  // namespace

TEST(ManufacturedSolution, DerivativesAndBoundaryConditions) {
  const ExactSolution w = manufactured_solution();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng), y = u(rng);
    const std::array<double, 2> p{x, y};
    EXPECT_NEAR(w.rot(p)[0], partial(w.value, 1, 0, x, y) - partial(w.value, 0, 1, x, y), 1e-8);
    EXPECT_NEAR(w.div(p)[0], partial(w.value, 0, 0, x, y) + partial(w.value, 1, 1, x, y), 1e-8);
    // f = curl rot w - grad div w + w with curl r = (d_y r, -d_x r).
    const auto f = w.forcing(p);
    const auto v = w.value(p);
    EXPECT_NEAR(f[0], partial(w.rot, 0, 1, x, y) - partial(w.div, 0, 0, x, y) + v[0], 1e-6);
    EXPECT_NEAR(f[1], -partial(w.rot, 0, 0, x, y) - partial(w.div, 0, 1, x, y) + v[1], 1e-6);
  }
  for (double t : {0.0, 0.3, 0.71, 1.0}) {
    for (const std::array<double, 2> p : {std::array{0.0, t}, std::array{1.0, t}}) {
      EXPECT_NEAR(w.value(p)[0], 0.0, 1e-15);
      EXPECT_NEAR(w.rot(p)[0], 0.0, 1e-14);
    }
    for (const std::array<double, 2> p : {std::array{t, 0.0}, std::array{t, 1.0}}) {
      EXPECT_NEAR(w.value(p)[1], 0.0, 1e-15);
      EXPECT_NEAR(w.rot(p)[0], 0.0, 1e-14);
    }
  }
}

TEST(Assembly, ZeroForcing) {
  Problem pb = make_problem(2, FormField{});
  EXPECT_EQ(pb.sys.b.norm(), 0.0);
  const SolveResult r = solve_cg(pb.sys);
  EXPECT_EQ(r.x.norm(), 0.0);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Assembly, SymmetricWithPositiveCellBlocks) {
  Problem pb = make_problem(4, manufactured_solution().forcing);
  const SparseMatrix& a = pb.sys.a;
  EXPECT_LE((SparseMatrix(a.transpose()) - a).norm(), 1e-12 * a.norm());
  for (int c = 0; c < pb.prod->num_cells(); ++c) {
    double trace = 0.0;
    for (int i = 0; i < ProductSpace::kLocalDim; ++i) {
      trace += pb.sys.a_cell.coeff(pb.prod->offset(c) + i, pb.prod->offset(c) + i);
    }
    EXPECT_GT(trace, 0.0);
  }
}

TEST(Assembly, ReproducesBrokenBilinearForm) {
  Problem pb = make_problem(2, FormField{}, MeshPattern::kCrissCross);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd x(pb.basis->size()), y(pb.basis->size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
    }
    const Eigen::VectorXd px = pb.basis->to_product() * x, py = pb.basis->to_product() * y;
    double direct = 0.0;
    for (int c = 0; c < pb.prod->num_cells(); ++c) {
      const Simplex& t = pb.prod->simplex(c);
      const PolyForm wx = pb.prod->cell_form(c, px), wy = pb.prod->cell_form(c, py);
      direct += l2_inner(exterior_derivative(wx), exterior_derivative(wy), t) +
                l2_inner(codifferential(wx), codifferential(wy), t) + l2_inner(wx, wy, t);
    }
    const double via_a = x.dot(pb.sys.a * y);
    EXPECT_NEAR(via_a, direct, 1e-11 * std::max(1.0, std::abs(direct)));
  }
}

TEST(Solve, CgMatchesDirect) {
  Problem pb = make_problem(4, manufactured_solution().forcing);
  const SolveResult cg = solve_cg(pb.sys);
  EXPECT_FALSE(cg.used_direct);
  EXPECT_LE(cg.relative_residual, 1e-10);
  const Eigen::VectorXd direct = solve_direct(pb.sys.a, pb.sys.b);
  EXPECT_LE((cg.x - direct).norm(), 1e-7 * direct.norm());
}

TEST(Solve, EnergyIdentity) {
  Problem pb = make_problem(4, manufactured_solution().forcing);
  const SolveResult r = solve_cg(pb.sys);
  const Eigen::VectorXd px = pb.basis->to_product() * r.x;
  EXPECT_NEAR(px.dot(pb.sys.a_cell * px), pb.sys.load.dot(px), 1e-10 * pb.sys.load.dot(px));
}

TEST(Solve, NonConvergenceCarriesHistory) {
  Problem pb = make_problem(4, manufactured_solution().forcing);
  CgOptions opt;
  opt.max_iter = 3;
  opt.direct_fallback_limit = 0;
  try {
    (void)solve_cg(pb.sys, opt);
    ADD_FAILURE() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.residuals().size(), 4u);
  }
  opt.direct_fallback_limit = 2000;
  const SolveResult r = solve_cg(pb.sys, opt);
  EXPECT_TRUE(r.used_direct);
  EXPECT_LE(r.relative_residual, 1e-10);
}

TEST(Oracle, MatchesBasisPath) {
  const FormField f = manufactured_solution().forcing;
  for (int m : {2, 4}) {
    Problem pb = make_problem(m, f);
    const ConstraintSystem cons = build_constraints(*pb.prod);
    const Eigen::VectorXd oracle = solve_oracle(*pb.prod, cons, f);
    EXPECT_LT((cons.stacked() * oracle).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::VectorXd basis_path = pb.basis->to_product() * solve_cg(pb.sys).x;
    EXPECT_LT((oracle - basis_path).cwiseAbs().maxCoeff(), 1e-8) << "m=" << m;
  }
}

TEST(ErrorNorms, OwnFormAndZero) {
  auto tri = std::make_shared<const Triangulation>(std::vector<Point2>{{0.0, 0.0}, {1.0, 0.1}, {0.2, 0.8}},
                                                   std::vector<Cell>{{0, 1, 2}});
  const ProductSpace prod(tri);
  Eigen::VectorXd x(6);
  x << 0.3, -1.0, 0.5, 2.0, -0.7, 1.1;
  const PolyForm w = prod.cell_form(0, x);
  const PolyForm dw = exterior_derivative(w), sw = codifferential(w);
  const Simplex& t = prod.simplex(0);
  ExactSolution own;
  own.value = [&](std::span<const double> p) { return evaluate(w, t, p); };
  own.rot = [&](std::span<const double> p) { return evaluate(dw, t, p); };
  own.div = [&](std::span<const double> p) {
    auto v = evaluate(sw, t, p);
    v[0] = -v[0];
    return v;
  };
  const ErrorNorms e = error_norms(prod, x, own);
  EXPECT_LT(e.energy, 1e-12);

  const ErrorNorms z = error_norms(prod, x, ExactSolution{});
  EXPECT_NEAR(z.l2 * z.l2, l2_inner(w, w, t), 1e-12);
  EXPECT_NEAR(z.rot * z.rot, l2_inner(dw, dw, t), 1e-12);
  EXPECT_NEAR(z.div * z.div, l2_inner(sw, sw, t), 1e-12);
}

TEST(Convergence, GalerkinWithinConstantOfInterpolant) {
  const ExactSolution w = manufactured_solution();
  double previous = 1e300;
  for (int m : {4, 8}) {
    Problem pb = make_problem(m, w.forcing);
    const ErrorNorms e = error_norms(*pb.prod, pb.basis->to_product() * solve_cg(pb.sys).x, w);
    const ErrorNorms ie = error_norms(*pb.prod, global_interpolate(as_smooth_form(w), *pb.prod), w);
    EXPECT_LT(e.energy, previous);
    EXPECT_LT(e.energy, 10 * ie.energy) << "m=" << m;
    previous = e.energy;
  }
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>

#include "compiled_form.hpp"
#include "nchodge/error.hpp"

namespace nchodge {

namespace {

using Triplet = Eigen::Triplet<double>;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

ExactSolution manufactured_solution() {
  constexpr double pi = std::numbers::pi;
  ExactSolution w;
  w.value = [](std::span<const double> p) {
    const double x = pi * p[0], y = pi * p[1];
    return std::vector<double>{std::sin(x) * std::cos(y), -2 * std::cos(x) * std::sin(y)};
  };
  w.rot = [](std::span<const double> p) {
    return std::vector<double>{3 * pi * std::sin(pi * p[0]) * std::sin(pi * p[1])};
  };
  w.div = [](std::span<const double> p) {
    return std::vector<double>{-pi * std::cos(pi * p[0]) * std::cos(pi * p[1])};
  };
  // Each component is an eigenfunction of -Laplace with eigenvalue 2 pi^2.
  w.forcing = [value = w.value](std::span<const double> p) {
    std::vector<double> f = value(p);
    for (double& c : f) c *= 1 + 2 * pi * pi;
    return f;
  };
  return w;
}

SmoothForm as_smooth_form(const ExactSolution& w) {
  SmoothForm f;
  f.ambient = 2;
  f.degree = 1;
  f.value = w.value;
  f.d = w.rot;
  if (w.div) {
    f.delta = [div = w.div](std::span<const double> p) {
      std::vector<double> v = div(p);
      for (double& c : v) c = -c;
      return v;
    };
  }
  return f;
}

SparseMatrix assemble_cell_operator(const ProductSpace& prod) {
  constexpr int n = ProductSpace::kLocalDim;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(prod.num_cells() * n * n));
  for (int c = 0; c < prod.num_cells(); ++c) {
    const ShapeSpace& s = prod.cell_space(c);
    const Simplex& simplex = s.simplex();
    std::vector<PolyForm> d, delta;
    for (int i = 0; i < n; ++i) {
      d.push_back(exterior_derivative(s[i]));
      delta.push_back(codifferential(s[i]));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const Rational v = l2_inner_exact(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)], simplex) +
                           l2_inner_exact(delta[static_cast<std::size_t>(i)], delta[static_cast<std::size_t>(j)], simplex) +
                           l2_inner_exact(s[i], s[j], simplex);
        if (v == 0) continue;
        const double dv = v.get_d();
        t.emplace_back(prod.offset(c) + i, prod.offset(c) + j, dv);
        if (i != j) t.emplace_back(prod.offset(c) + j, prod.offset(c) + i, dv);
      }
    }
  }
  SparseMatrix a(prod.dimension(), prod.dimension());
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::VectorXd assemble_load(const ProductSpace& prod, const FormField& f, int quad_order) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(prod.dimension());
  if (!f) return load;
  for (int c = 0; c < prod.num_cells(); ++c) {
    const ShapeSpace& s = prod.cell_space(c);
    std::vector<detail::CompiledForm> basis;
    for (const PolyForm& mu : s.basis()) basis.emplace_back(mu);
    const QuadratureRule rule = quadrature_rule(s.simplex(), quad_order);
    double val[2];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const std::vector<double> fx = f(rule.points[q]);
      const std::vector<double> xc = s.simplex().centered(rule.points[q]);
      for (int j = 0; j < ProductSpace::kLocalDim; ++j) {
        basis[static_cast<std::size_t>(j)].evaluate(xc, val);
        load[prod.offset(c) + j] += rule.weights[q] * (fx[0] * val[0] + fx[1] * val[1]);
      }
    }
  }
  return load;
}

AssembledSystem assemble(const ProductSpace& prod, const GlobalBasis& basis, const FormField& f, int quad_order) {
  const auto start = Clock::now();
  AssembledSystem sys;
  sys.a_cell = assemble_cell_operator(prod);
  sys.load = assemble_load(prod, f, quad_order);
  const SparseMatrix& phi = basis.to_product();
  sys.a = SparseMatrix(phi.transpose() * sys.a_cell * phi);
  sys.a.prune(0.0);
  sys.b = phi.transpose() * sys.load;
  sys.assembly_ms = elapsed_ms(start);
  return sys;
}

Eigen::VectorXd solve_direct(const SparseMatrix& a, const Eigen::VectorXd& b) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Eigen::MatrixXd(a).selfadjointView<Eigen::Lower>());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw NumericalError("matrix is not positive definite");
  return ldlt.solve(b);
}

SolveResult solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b, const CgOptions& options) {
  const auto start = Clock::now();
  const Eigen::Index n = a.rows();
  SolveResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (n == 0 || bnorm == 0.0) {
    res.wall_ms = elapsed_ms(start);
    return res;
  }
  const Eigen::VectorXd inv_diag = a.diagonal().cwiseInverse();
  if (!inv_diag.allFinite() || (a.diagonal().array() <= 0.0).any()) {
    throw NumericalError("CG needs a positive diagonal");
  }
  const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(10 * n);

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  res.residual_history.push_back(1.0);
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd ap = a * p;
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    res.x += alpha * p;
    r -= alpha * ap;
    res.iterations = it;
    const double rel = r.norm() / bnorm;
    res.residual_history.push_back(rel);
    if (rel <= options.tol) {
      converged = true;
      break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (!converged) {
    if (n > options.direct_fallback_limit) {
      throw NumericalError("CG did not converge in " + std::to_string(res.iterations) + " iterations",
                           res.residual_history);
    }
    res.x = solve_direct(a, b);
    res.used_direct = true;
  }
  res.relative_residual = (b - a * res.x).norm() / bnorm;
  res.wall_ms = elapsed_ms(start);
  return res;
}

SolveResult solve_cg(const AssembledSystem& sys, const CgOptions& options) { return solve_cg(sys.a, sys.b, options); }

Eigen::VectorXd solve_oracle(const ProductSpace& prod, const ConstraintSystem& cons, const FormField& f,
                             int quad_order) {
  const SparseMatrix a = assemble_cell_operator(prod);
  const SparseMatrix b = cons.stacked();
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  std::vector<Triplet> t;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int k = 0; k < b.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
      t.emplace_back(n + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), n + it.row(), it.value());
    }
  }
  SparseMatrix k(n + m, n + m);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.head(n) = assemble_load(prod, f, quad_order);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(k);
  if (lu.info() != Eigen::Success) throw NumericalError("saddle-point system is singular: " + lu.lastErrorMessage());
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite()) throw NumericalError("saddle-point solve failed");
  return sol.head(n);
}

ErrorNorms error_norms(const ProductSpace& prod, const Eigen::VectorXd& product_coefficients,
                       const ExactSolution& exact, int quad_order) {
  double l2 = 0.0, rot = 0.0, div = 0.0;
  for (int c = 0; c < prod.num_cells(); ++c) {
    const Simplex& t = prod.simplex(c);
    const PolyForm w = prod.cell_form(c, product_coefficients);
    const detail::CompiledForm wv(w), wd(exterior_derivative(w)), ws(codifferential(w));
    const QuadratureRule rule = quadrature_rule(t, quad_order);
    double v[2], dv[1], sv[1];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& x = rule.points[q];
      const std::vector<double> xc = t.centered(x);
      wv.evaluate(xc, v);
      wd.evaluate(xc, dv);
      ws.evaluate(xc, sv);
      const std::vector<double> ev = exact.value ? exact.value(x) : std::vector<double>{0.0, 0.0};
      const double er = (exact.rot ? exact.rot(x)[0] : 0.0) - dv[0];
      const double ed = (exact.div ? exact.div(x)[0] : 0.0) + sv[0];  // div_h w = -delta w
      const double w8 = rule.weights[q];
      l2 += w8 * ((ev[0] - v[0]) * (ev[0] - v[0]) + (ev[1] - v[1]) * (ev[1] - v[1]));
      rot += w8 * er * er;
      div += w8 * ed * ed;
    }
  }
  ErrorNorms out;
  out.l2 = std::sqrt(std::max(l2, 0.0));
  out.rot = std::sqrt(std::max(rot, 0.0));
  out.div = std::sqrt(std::max(div, 0.0));
  out.energy = std::sqrt(out.l2 * out.l2 + out.rot * out.rot + out.div * out.div);
  return out;
}

}  // namespace nchodge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/study.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_refinements(const std::vector<int>& refinements) {
  if (refinements.empty()) throw DomainError("empty refinement list");
  for (std::size_t i = 0; i < refinements.size(); ++i) {
    if (refinements[i] < 1) throw DomainError("refinement values must be positive");
    if (i > 0 && refinements[i] <= refinements[i - 1]) throw DomainError("refinement list must be strictly increasing");
  }
}

void fill_rates(StudyResult& r) {
  std::vector<double> h, l2, rot, div, energy;
  for (const StudyRow& row : r.rows) {
    h.push_back(row.h);
    l2.push_back(row.err.l2);
    rot.push_back(row.err.rot);
    div.push_back(row.err.div);
    energy.push_back(row.err.energy);
  }
  r.l2_rate = fitted_rate(h, l2);
  r.rot_rate = fitted_rate(h, rot);
  r.div_rate = fitted_rate(h, div);
  r.energy_rate = fitted_rate(h, energy);
}

}  // namespace

std::shared_ptr<const Triangulation> make_mesh(const MeshSource& source, int m) {
  if (source.file) return std::make_shared<const Triangulation>(subdivide(read_mesh_file(*source.file), m));
  return std::make_shared<const Triangulation>(generate_square_mesh(m, source.pattern));
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < h.size() && i < err.size(); ++i) {
    if (!(h[i] > 0) || !(err[i] > 0)) continue;
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den <= 0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

StudyResult interpolation_study(const StudyOptions& options, const ExactSolution& exact) {
  check_refinements(options.refinements);
  const auto start = Clock::now();
  const SmoothForm mu = as_smooth_form(exact);
  StudyResult out;
  for (int m : options.refinements) {
    const auto t0 = Clock::now();
    const auto tri = make_mesh(options.mesh, m);
    const ProductSpace prod(tri);
    const Eigen::VectorXd x = global_interpolate(mu, prod, options.dof_quad_order);
    StudyRow row;
    row.mesh_m = m;
    row.h = tri->mesh_size();
    row.dofs = build_global_basis(prod).size();
    row.err = error_norms(prod, x, exact, options.quad_order);
    const Eigen::VectorXd residual = build_constraints(prod).stacked() * x;
    row.constraint_residual = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
    row.wall_ms = elapsed_ms(t0);
    out.rows.push_back(row);
  }
  fill_rates(out);
  out.wall_ms = elapsed_ms(start);
  return out;
}

StudyResult solve_study(const StudyOptions& options, const ExactSolution& exact) {
  check_refinements(options.refinements);
  if (!exact.forcing) throw DomainError("solve study needs a forcing term");
  const auto start = Clock::now();
  StudyResult out;
  out.solver = true;
  CgOptions cg;
  cg.tol = options.tol;
  cg.max_iter = options.max_iter;
  for (int m : options.refinements) {
    const auto t0 = Clock::now();
    const auto tri = make_mesh(options.mesh, m);
    const ProductSpace prod(tri);
    const GlobalBasis basis = build_global_basis(prod);
    const AssembledSystem sys = assemble(prod, basis, exact.forcing, options.quad_order);
    const SolveResult sol = solve_cg(sys, cg);
    const Eigen::VectorXd x = basis.to_product() * sol.x;
    StudyRow row;
    row.mesh_m = m;
    row.h = tri->mesh_size();
    row.dofs = basis.size();
    row.err = error_norms(prod, x, exact, options.quad_order);
    row.cg_iters = sol.iterations;
    row.used_direct = sol.used_direct;
    row.relative_residual = sol.relative_residual;
    const double anorm = sys.a.norm();
    row.symmetry = anorm > 0 ? (SparseMatrix(sys.a.transpose()) - sys.a).norm() / anorm : 0.0;
    const ConstraintSystem cons = build_constraints(prod);
    const Eigen::VectorXd residual = cons.stacked() * x;
    row.constraint_residual = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
    row.wall_ms = elapsed_ms(t0);
    if (options.oracle && m <= options.oracle_max_m) {
      const Eigen::VectorXd xo = solve_oracle(prod, cons, exact.forcing, options.quad_order);
      row.oracle_diff = (xo - x).cwiseAbs().maxCoeff() / std::max(1.0, xo.cwiseAbs().maxCoeff());
    }
    out.rows.push_back(row);
  }
  fill_rates(out);
  out.wall_ms = elapsed_ms(start);
  return out;
}

void write_csv(const StudyResult& result, std::ostream& out) {
  out << "mesh_m,h,dofs,l2_err,rot_err,div_err,energy_err," << (result.solver ? "cg_iters," : "") << "wall_ms\n";
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out.precision(10);
  for (const StudyRow& r : result.rows) {
    out << r.mesh_m << ',' << r.h << ',' << r.dofs << ',' << r.err.l2 << ',' << r.err.rot << ',' << r.err.div << ','
        << r.err.energy << ',';
    if (result.solver) out << r.cg_iters << ',';
    out << r.wall_ms << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace nchodge

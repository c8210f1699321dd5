// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "nchodge/error.hpp"
#include "nchodge/study.hpp"

using namespace nchodge;

TEST(FittedRate, RecoversPowerLaw) {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * x * x);
  EXPECT_NEAR(fitted_rate(h, e), 2.0, 1e-12);
  EXPECT_TRUE(std::isnan(fitted_rate({0.5}, {1.0})));
}

TEST(Subdivide, CountsAndBoundary) {
  const Triangulation base = generate_square_mesh(2, MeshPattern::kDiagonal);
  const Triangulation fine = subdivide(base, 3);
  EXPECT_EQ(fine.num_cells(), 9 * base.num_cells());
  // V = (3m + 1)^2 for the square.
  EXPECT_EQ(fine.num_vertices(), 49);
  EXPECT_EQ(fine.euler_characteristic(), 1);
  EXPECT_NEAR(fine.mesh_size(), base.mesh_size() / 3, 1e-15);
  EXPECT_EQ(subdivide(base, 1).num_cells(), base.num_cells());
  EXPECT_THROW(subdivide(base, 0), DomainError);
}

TEST(Study, RefinementListValidated) {
  StudyOptions o;
  o.refinements = {4, 2};
  EXPECT_THROW(interpolation_study(o), DomainError);
  o.refinements = {};
  EXPECT_THROW(solve_study(o), DomainError);
}

TEST(Study, InterpolationCsvSchema) {
  StudyOptions o;
  o.refinements = {2, 4};
  const StudyResult r = interpolation_study(o);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_LT(r.rows[1].err.energy, r.rows[0].err.energy);
  EXPECT_LT(r.rows[0].constraint_residual, 1e-9);
  std::ostringstream out;
  write_csv(r, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "mesh_m,h,dofs,l2_err,rot_err,div_err,energy_err,wall_ms");
}

TEST(Study, SolveRowsCarryOracleAndSolverColumns) {
  StudyOptions o;
  o.refinements = {2, 4, 8};
  const StudyResult r = solve_study(o);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_GE(r.rows[0].oracle_diff, 0.0);
  EXPECT_LT(r.rows[1].oracle_diff, 1e-8);
  EXPECT_EQ(r.rows[2].oracle_diff, -1.0);
  for (const StudyRow& row : r.rows) {
    EXPECT_LT(row.symmetry, 1e-12);
    EXPECT_LT(row.constraint_residual, 1e-10);
  }
  std::ostringstream out;
  write_csv(r, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "mesh_m,h,dofs,l2_err,rot_err,div_err,energy_err,cg_iters,wall_ms");
}

TEST(Study, MeshFileIsSubdivided) {
  const std::string path = testing::TempDir() + "study_mesh.txt";
  {
    std::ofstream f(path);
    f << write_mesh(generate_square_mesh(2, MeshPattern::kCrissCross));
  }
  StudyOptions o;
  o.mesh.file = path;
  o.refinements = {1, 2};
  const StudyResult r = interpolation_study(o);
  EXPECT_NEAR(r.rows[1].h, r.rows[0].h / 2, 1e-14);
  EXPECT_LT(r.rows[1].err.energy, r.rows[0].err.energy);
}

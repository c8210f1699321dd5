// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

// Runs the eight acceptance criteria with pinned tolerances and prints one
// line per criterion. Exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "nchodge/global_space.hpp"
#include "nchodge/study.hpp"
#include "nchodge/verify.hpp"

using namespace nchodge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool report(int id, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  return ok;
}

// Failed checks of the given names, as "name(n,k)".
std::string failures(const VerifyReport& r, const std::set<std::string>& names, bool include, double& max_err,
                     int& count) {
  std::string out;
  for (const CheckResult& c : r.checks) {
    if (names.count(c.name) != static_cast<std::size_t>(include)) continue;
    ++count;
    max_err = std::max(max_err, c.max_error);
    if (!c.passed) out += " " + c.name + "(" + std::to_string(c.n) + "," + std::to_string(c.k) + ")";
  }
  return out;
}

const std::set<std::string> kFloatChecks = {"koszul_energy", "dof_condition", "projection_float", "fourstep_direct"};

bool criterion1() {
  const auto t0 = Clock::now();
  VerifyOptions opt;
  VerifyReport r;
  verify_exterior_algebra(opt, r);
  opt.unisolvence_triangles = 0;
  verify_unisolvence(opt, r);
  const double secs = seconds_since(t0);
  double err = 0;
  int count = 0;
  const std::string bad = failures(r, kFloatChecks, false, err, count);
  std::set<std::pair<int, int>> pairs;
  for (const CheckResult& c : r.checks) pairs.insert({c.n, c.k});
  const bool ok = bad.empty() && pairs.size() == 6 && secs < 10.0;
  return report(1, ok, std::to_string(count) + " exact checks over " + std::to_string(pairs.size()) +
                           " (n,k) pairs, " + fmt("%.2f s", secs) + (bad.empty() ? "" : ", failed:" + bad));
}

bool criterion2() {
  VerifyReport r;
  verify_koszul_energy(VerifyOptions{}, r);
  double err = 0;
  int count = 0;
  const std::string bad = failures(r, {"koszul_energy"}, true, err, count);
  int cases = 0;
  for (const CheckResult& c : r.checks) cases += c.cases;
  return report(2, bad.empty() && count == 3 && err <= 1e-12,
                std::to_string(cases) + " simplices, max rel err " + fmt("%.2e", err) + " (tol 1e-12)" + bad);
}

bool criterion3() {
  VerifyOptions opt;
  VerifyReport r;
  verify_unisolvence(opt, r);
  std::ostringstream d;
  bool ok = true;
  for (const char* name : {"dof_condition", "projection_float", "fourstep_direct"}) {
    for (const CheckResult* c : r.select(name)) {
      if (c->name != name) continue;
      ok = ok && c->passed && c->cases >= 1000;
      d << name << " " << fmt("%.2e", c->max_error) << " (" << c->cases << " triangles) ";
    }
  }
  return report(3, ok, d.str());
}

bool criterion4() {
  StudyOptions opt;
  opt.refinements = {2, 4, 8, 16};
  const StudyResult res = interpolation_study(opt);
  double worst = 0;
  for (const StudyRow& row : res.rows) worst = std::max(worst, row.constraint_residual);
  return report(4, worst <= 1e-9, "max |B I omega| over m=2..16: " + fmt("%.2e", worst) + " (tol 1e-9)");
}

bool criterion5() {
  StudyOptions opt;
  opt.refinements = {2, 4, 8, 16};
  const auto t0 = Clock::now();
  const StudyResult res = interpolation_study(opt);
  const double secs = seconds_since(t0);
  const double r = res.energy_rate;
  return report(5, r >= 0.9 && r <= 1.2 && secs < 60.0,
                "energy rate " + fmt("%.3f", r) + " in [0.9, 1.2], " + fmt("%.1f s", secs));
}

bool criterion6() {
  bool ok = true;
  std::ostringstream d;
  for (int m : {2, 4}) {
    const ProductSpace prod(std::make_shared<const Triangulation>(generate_square_mesh(m, MeshPattern::kDiagonal)));
    const int rank = numerical_rank(build_constraints(prod).stacked());
    const int count = build_global_basis(prod).size();
    const int expected = 6 * prod.num_cells() - rank;
    ok = ok && count == expected;
    d << "m=" << m << " basis " << count << " = 6T-rank " << expected << "; ";
  }
  StudyOptions opt;
  opt.refinements = {2, 4};
  opt.oracle_max_m = 4;
  const StudyResult res = solve_study(opt);
  double diff = 0;
  for (const StudyRow& row : res.rows) {
    ok = ok && row.oracle_diff >= 0;
    diff = std::max(diff, row.oracle_diff);
  }
  ok = ok && diff <= 1e-8;
  d << "oracle diff " << fmt("%.2e", diff) << " (tol 1e-8)";
  return report(6, ok, d.str());
}

bool criterion7() {
  StudyOptions opt;
  opt.refinements = {4, 8, 16, 32};
  opt.oracle = false;
  const auto t0 = Clock::now();
  const StudyResult res = solve_study(opt);
  const double secs = seconds_since(t0);
  double sym = 0;
  bool iters_ok = true;
  std::ostringstream it;
  for (const StudyRow& row : res.rows) {
    sym = std::max(sym, row.symmetry);
    const double bound = 5.0 * std::sqrt(static_cast<double>(row.dofs));
    const bool ok = !row.used_direct && row.cg_iters <= bound;
    iters_ok = iters_ok && ok;
    it << " m=" << row.mesh_m << ":" << row.cg_iters << (row.used_direct ? "+direct" : "") << "/"
       << static_cast<int>(bound);
  }
  const double r = res.energy_rate;
  const bool rate_ok = r >= 0.9 && r <= 1.2;
  const bool ok = rate_ok && sym <= 1e-12 && iters_ok && secs <= 300.0;
  return report(7, ok,
                "energy rate " + fmt("%.3f", r) + ", symmetry " + fmt("%.1e", sym) + ", cg iters/bound" + it.str() +
                    (iters_ok ? "" : " (bound exceeded)") + ", " + fmt("%.1f s", secs));
}

bool criterion8() {
  bool ok = true;
  std::ostringstream d;
  std::map<int, int> degrees_seen;
  for (int m : {2, 4}) {
    const auto tri = std::make_shared<const Triangulation>(generate_square_mesh(m, MeshPattern::kDiagonal));
    const GlobalBasis basis = build_global_basis(ProductSpace(tri));
    std::map<int, int> rot, div;
    for (const BasisFunction& f : basis.functions()) {
      ok = ok && (f.cells.size() == 1 || f.cells.size() == 2);
      if (f.category == BasisCategory::kRotPatch) ++rot[f.anchor];
      if (f.category == BasisCategory::kDivPatch) ++div[f.anchor];
    }
    for (int v = 0; v < tri->num_vertices(); ++v) {
      if (!tri->is_interior(v)) continue;
      const int deg = static_cast<int>(tri->patch(v).size());
      ok = ok && rot[v] == deg - 1 && div[v] == deg - 1;
      ++degrees_seen[deg];
    }
  }
  ok = ok && degrees_seen.count(6);
  d << "supports in {1,2}; interior degrees";
  for (const auto& [deg, n] : degrees_seen) d << " " << deg << "x" << n;
  d << " all give d-1 ROT_PATCH and d-1 DIV_PATCH";
  return report(8, ok, d.str());
}

}  // namespace

int main() {
  int failed = 0;
  bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8};
  for (int i = 0; i < 8; ++i) {
    try {
      failed += !criteria[i]();
    } catch (const std::exception& e) {
      report(i + 1, false, std::string("exception: ") + e.what());
      ++failed;
    }
  }
  std::cout << (8 - failed) << "/8 criteria passed" << std::endl;
  return failed ? 1 : 0;
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/verify.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

#include "json.hpp"

#include "nchodge/error.hpp"
#include "nchodge/forms.hpp"
#include "nchodge/local_element.hpp"

namespace nchodge {

namespace {

using Clock = std::chrono::steady_clock;

int parity(int e) { return e % 2 == 0 ? 1 : -1; }

Polynomial random_poly(int n, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  Polynomial p(n);
  for (int t = 0; t < 4; ++t) {
    Exponent e{};
    int left = std::uniform_int_distribution<int>(0, deg)(rng);
    for (int j = 0; j < n && left > 0; ++j) {
      const int pj = std::uniform_int_distribution<int>(0, left)(rng);
      e[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(pj);
      left -= pj;
    }
    p += Polynomial::monomial(n, e, Rational(coeff(rng), 1 + std::abs(coeff(rng))));
  }
  return p;
}

PolyForm random_form(int n, int k, int deg, std::mt19937_64& rng) {
  PolyForm w(n, k);
  for (const auto& a : MultiIndex::enumerate(n, k)) w.add(a, random_poly(n, deg, rng));
  return w;
}

PolyForm random_constant_form(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  PolyForm w(n, k);
  for (const auto& a : MultiIndex::enumerate(n, k)) w.add(a, Polynomial::constant(n, Rational(coeff(rng), 3)));
  if (w.is_zero()) w.add(MultiIndex::enumerate(n, k).front(), Polynomial::constant(n, 1));
  return w;
}

// Collects exact equality checks for one named identity at one (n, k).
class ExactCheck {
 public:
  ExactCheck(std::string name, int n, int k) { r_.name = std::move(name), r_.n = n, r_.k = k; }

  void expect(const PolyForm& got, const PolyForm& want, const std::string& what) {
    ++r_.cases;
    if (got == want) return;
    if (r_.passed) r_.detail = what + ": got " + got.to_string() + ", want " + want.to_string();
    r_.passed = false;
  }
  void expect_zero(const PolyForm& got, const std::string& what) { expect(got, PolyForm(got.ambient(), got.degree()), what); }

  CheckResult done() {
    if (!r_.passed) r_.max_error = std::numeric_limits<double>::infinity();
    return std::move(r_);
  }

 private:
  CheckResult r_;
};

int exact_rank(std::vector<std::vector<Rational>> a) {
  int rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t p = static_cast<std::size_t>(rank);
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == static_cast<std::size_t>(rank) || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[static_cast<std::size_t>(rank)][c];
      for (std::size_t cc = c; cc < cols; ++cc) a[r][cc] -= f * a[static_cast<std::size_t>(rank)][cc];
    }
    ++rank;
  }
  return rank;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<const CheckResult*> VerifyReport::select(const std::string& prefix) const {
  std::vector<const CheckResult*> out;
  for (const CheckResult& c : checks) {
    if (c.name.rfind(prefix, 0) == 0) out.push_back(&c);
  }
  return out;
}

std::shared_ptr<const Simplex> random_simplex(int n, std::mt19937_64& rng, double scale, double max_ratio) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<std::vector<double>> v(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j < n; ++j) {
        v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = scale * ((i == j + 1 ? 1.0 : 0.0) + 0.3 * u(rng));
      }
    }
    try {
      auto t = std::make_shared<const Simplex>(Simplex::from_doubles(v));
      if (t->shape_ratio() < max_ratio) return t;
    } catch (const DomainError&) {
      // degenerate draw
    }
  }
}

void verify_exterior_algebra(const VerifyOptions& options, VerifyReport& report) {
  std::mt19937_64 rng(options.seed);
  constexpr auto kPlain = Codifferential::kPlainKn;
  for (int n = options.min_dim; n <= options.max_dim; ++n) {
    const auto t = random_simplex(n, rng);
    for (int k = 1; k <= n - 1; ++k) {
      ExactCheck dd("d_nilpotent", n, k), ss("delta_nilpotent", n, k), star("star_involution", n, k);
      for (int s = 0; s < options.samples; ++s) {
        const PolyForm w = random_form(n, k - 1, 3, rng);
        dd.expect_zero(exterior_derivative(exterior_derivative(w)), "d d w");
        const PolyForm v = random_form(n, k + 1, 3, rng);
        ss.expect_zero(codifferential(codifferential(v)), "delta delta v (adjoint)");
        ss.expect_zero(codifferential(codifferential(v, kPlain), kPlain), "delta delta v (plain)");
        const PolyForm u = random_form(n, k, 3, rng);
        star.expect(hodge_star(hodge_star(u)), Rational(parity(k * (n - k))) * u, "star star u");
      }
      report.checks.push_back(dd.done());
      report.checks.push_back(ss.done());
      report.checks.push_back(star.done());

      ExactCheck dk("d_kappa_scaling", n, k);
      for (const auto& a : MultiIndex::enumerate(n, k + 1)) {
        const PolyForm base = PolyForm::basis(a);
        dk.expect(exterior_derivative(koszul(base)), Rational(k + 1) * base, "d kappa dx^" + a.to_string());
      }
      report.checks.push_back(dk.done());

      ExactCheck skp("delta_star_kappa_star_plain", n, k), ska("delta_star_kappa_star_adjoint", n, k);
      for (const auto& a : MultiIndex::enumerate(n, k - 1)) {
        const PolyForm base = PolyForm::basis(a);
        const PolyForm skw = hodge_star(koszul(hodge_star(base)));
        skp.expect(codifferential(skw, kPlain), Rational(parity(k * n - n - 1) * (n - k + 1)) * base,
                   "delta star kappa star dx^" + a.to_string());
        ska.expect(codifferential(skw), Rational(parity(k * n) * (n - k + 1)) * base,
                   "delta star kappa star dx^" + a.to_string());
      }
      report.checks.push_back(skp.done());
      report.checks.push_back(ska.done());

      ExactCheck aod("aod", n, k), adp("aodelta_plain", n, k), ada("aodelta_adjoint", n, k);
      for (const auto& a : MultiIndex::enumerate(n, k)) {
        const PolyForm base = PolyForm::basis(a);
        const PolyForm hd = build_h2d_form(a, *t);
        const PolyForm hdelta = build_h2delta_form(a, *t);
        aod.expect(exterior_derivative(hd), Rational(2 * parity(n * (1 + k) + 1)) * hodge_star(koszul(hodge_star(base))),
                   "d H2d(" + a.to_string() + ")");
        aod.expect_zero(codifferential(hd), "delta H2d(" + a.to_string() + ")");
        adp.expect(codifferential(hdelta, kPlain), Rational(2 * parity(n)) * koszul(base),
                   "delta H2delta(" + a.to_string() + ")");
        adp.expect_zero(exterior_derivative(hdelta), "d H2delta(" + a.to_string() + ")");
        ada.expect(codifferential(hdelta), Rational(-2) * koszul(base), "delta H2delta(" + a.to_string() + ")");
      }
      report.checks.push_back(aod.done());
      report.checks.push_back(adp.done());
      report.checks.push_back(ada.done());
    }
  }
}

void verify_koszul_energy(const VerifyOptions& options, VerifyReport& report) {
  std::mt19937_64 rng(options.seed + 1);
  for (int n = options.min_dim; n <= std::min(options.max_dim, 3); ++n) {
    for (int k = 1; k <= n - 1; ++k) {
      CheckResult r;
      r.name = "koszul_energy";
      r.n = n;
      r.k = k;
      r.tolerance = options.energy_tol;
      for (int s = 0; s < options.energy_simplices; ++s) {
        const auto t = random_simplex(n, rng, std::exp(std::uniform_real_distribution<double>(-2.0, 1.0)(rng)));
        const PolyForm mu = koszul(random_constant_form(n, k + 1, rng));
        const PolyForm dmu = exterior_derivative(mu);
        const double lhs = std::sqrt(l2_inner(dmu, dmu, *t));
        const double rhs = std::sqrt((k + 1) * h1_seminorm_squared(mu, *t));
        const double err = std::abs(lhs - rhs) / std::max(rhs, std::numeric_limits<double>::min());
        r.max_error = std::max(r.max_error, err);
        ++r.cases;
      }
      r.passed = r.max_error <= r.tolerance;
      if (!r.passed) r.detail = "relative error above tolerance";
      report.checks.push_back(std::move(r));
    }
  }
}

void verify_unisolvence(const VerifyOptions& options, VerifyReport& report) {
  std::mt19937_64 rng(options.seed + 2);
  for (int n = options.min_dim; n <= options.max_dim; ++n) {
    for (int k = 1; k <= n - 1; ++k) {
      const auto t = random_simplex(n, rng);
      const ShapeSpace s = build_shape_space(n, k, t);
      const DofBasis dofs = build_dof_basis(s);
      const DofMatrix dm = build_dof_matrix(s, dofs);
      CheckResult uni{"unisolvence_exact", n, k, true, 1, 0.0, 0.0, ""};
      const int rank = exact_rank(dm.exact);
      if (dm.exact.size() != static_cast<std::size_t>(s.dimension()) || rank != s.dimension()) {
        uni.passed = false;
        uni.detail = "rank " + std::to_string(rank) + " of " + std::to_string(s.dimension());
      }
      report.checks.push_back(std::move(uni));
      if (rank != s.dimension()) continue;

      ExactCheck proj("projection_exact", n, k);
      for (int i = 0; i < s.dimension(); ++i) {
        for (auto method : {InterpolationMethod::kDirect, InterpolationMethod::kFourStep}) {
          const auto c = interpolate_exact(s[i], s, dofs, method);
          proj.expect(s.combine(c), s[i], std::string(method == InterpolationMethod::kDirect ? "DIRECT" : "FOURSTEP") +
                                              " shape function " + std::to_string(i));
        }
      }
      report.checks.push_back(proj.done());
    }
  }

  // Floating path on random shape-regular triangles with scaled DOFs.
  if (options.min_dim > 2) return;
  CheckResult cond{"dof_condition", 2, 1, true, 0, 0.0, std::numeric_limits<double>::infinity(), ""};
  CheckResult proj{"projection_float", 2, 1, true, 0, 0.0, options.projection_tol, ""};
  CheckResult four{"fourstep_direct", 2, 1, true, 0, 0.0, options.projection_tol, ""};
  std::normal_distribution<double> g;
  for (int trial = 0; trial < options.unisolvence_triangles; ++trial) {
    const double scale = std::exp(std::uniform_real_distribution<double>(-3.0, 1.0)(rng));
    const auto t = random_simplex(2, rng, scale);
    const ShapeSpace s = build_shape_space(2, 1, t);
    const DofBasis dofs = build_dof_basis(s, true);
    const DofMatrix dm = build_dof_matrix(s, dofs);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dm.values);
    const Eigen::VectorXd sv = svd.singularValues();
    const double c = sv[0] / sv[sv.size() - 1];
    ++cond.cases;
    cond.max_error = std::max(cond.max_error, c);
    if (!std::isfinite(c)) {
      cond.passed = false;
      cond.detail = "singular DOF matrix at trial " + std::to_string(trial);
    }
    for (int i = 0; i < s.dimension(); ++i) {
      const Eigen::VectorXd values = dm.values.col(i);
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(s.dimension(), i);
      for (auto method : {InterpolationMethod::kDirect, InterpolationMethod::kFourStep}) {
        proj.max_error = std::max(proj.max_error, (solve_dofs(dm, s, dofs, values, method) - e).cwiseAbs().maxCoeff());
      }
      ++proj.cases;
    }
    Eigen::VectorXd values(s.dimension());
    for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = g(rng);
    const Eigen::VectorXd a = solve_dofs(dm, s, dofs, values, InterpolationMethod::kDirect);
    const Eigen::VectorXd b = solve_dofs(dm, s, dofs, values, InterpolationMethod::kFourStep);
    four.max_error = std::max(four.max_error, (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()));
    ++four.cases;
  }
  proj.passed = proj.max_error <= proj.tolerance;
  four.passed = four.max_error <= four.tolerance;
  if (!proj.passed) proj.detail = "coefficient error above tolerance";
  if (!four.passed) four.detail = "FOURSTEP and DIRECT disagree";
  report.checks.push_back(std::move(cond));
  report.checks.push_back(std::move(proj));
  report.checks.push_back(std::move(four));
}

VerifyReport run_verify(const VerifyOptions& options) {
  const auto start = Clock::now();
  VerifyReport report;
  verify_exterior_algebra(options, report);
  verify_koszul_energy(options, report);
  verify_unisolvence(options, report);
  report.wall_ms = elapsed_ms(start);
  return report;
}

void write_verify_json(const VerifyReport& report, std::ostream& out) {
  using nlohmann::json;
  json j;
  j["passed"] = report.passed();
  j["wall_ms"] = report.wall_ms;
  std::map<std::string, std::pair<int, int>> counts;
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    auto& [ok, total] = counts["n=" + std::to_string(c.n) + ",k=" + std::to_string(c.k)];
    ok += c.passed;
    ++total;
    json e{{"name", c.name}, {"n", c.n}, {"k", c.k}, {"passed", c.passed}, {"cases", c.cases}};
    if (std::isfinite(c.max_error)) e["max_error"] = c.max_error;
    if (c.tolerance > 0 && std::isfinite(c.tolerance)) e["tolerance"] = c.tolerance;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  json jc = json::object();
  for (const auto& [key, v] : counts) jc[key] = {{"passed", v.first}, {"total", v.second}};
  j["counts"] = std::move(jc);
  j["checks"] = std::move(checks);
  out << j.dump(2) << '\n';
}

}  // namespace nchodge

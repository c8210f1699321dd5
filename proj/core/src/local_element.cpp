// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/local_element.hpp"

#include "compiled_form.hpp"
#include "dense.hpp"
#include "nchodge/error.hpp"

namespace nchodge {

namespace {

void require_interior_degree(int n, int k) {
  if (k < 1 || k > n - 1) {
    throw DomainError("the element needs 1 <= k <= n-1 (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
}

Polynomial centered_square(const Simplex& t, int axis) {
  const int n = t.dimension();
  const Polynomial x = Polynomial::variable(n, axis);
  return x * x - Polynomial::constant(n, t.second_moments()[static_cast<std::size_t>(axis - 1)]);
}

PolyForm star_kappa_star(const PolyForm& w) { return hodge_star(koszul(hodge_star(w))); }

// <d mu, eta> - <mu, delta eta>
Rational eta_functional(const PolyForm& mu, const PolyForm& eta, const Simplex& t) {
  return l2_inner_exact(exterior_derivative(mu), eta, t) - l2_inner_exact(mu, codifferential(eta), t);
}

// <delta mu, tau> - <mu, d tau>
Rational tau_functional(const PolyForm& mu, const PolyForm& tau, const Simplex& t) {
  return l2_inner_exact(codifferential(mu), tau, t) - l2_inner_exact(mu, exterior_derivative(tau), t);
}

struct Step {
  int row_begin;
  int row_count;
  ShapeBlock block;
};

std::vector<Step> four_steps(const DofBasis& dofs) {
  const int ne = static_cast<int>(dofs.eta.size());
  const int nt = static_cast<int>(dofs.tau.size());
  return {{ne, dofs.tau_constant, ShapeBlock::kStarKappa},
          {ne + dofs.tau_constant, nt - dofs.tau_constant, ShapeBlock::kP0},
          {0, dofs.eta_constant, ShapeBlock::kKappa},
          {dofs.eta_constant, ne - dofs.eta_constant, ShapeBlock::kH2d}};
}

template <class T, class Entry>
std::vector<T> four_step_solve(const ShapeSpace& space, const DofBasis& dofs, const std::vector<T>& values,
                               Entry entry) {
  std::vector<T> coeffs(static_cast<std::size_t>(space.dimension()), T(0));
  std::vector<ShapeBlock> solved;
  for (const Step& step : four_steps(dofs)) {
    const auto [col0, ncol] = space.block_range(step.block);
    if (ncol != step.row_count) throw NumericalError("DOF block sizes do not match shape blocks");
    detail::Dense<T> a(static_cast<std::size_t>(ncol), std::vector<T>(static_cast<std::size_t>(ncol)));
    std::vector<T> rhs(static_cast<std::size_t>(ncol));
    for (int r = 0; r < ncol; ++r) {
      const int row = step.row_begin + r;
      T b = values[static_cast<std::size_t>(row)];
      for (ShapeBlock prev : solved) {
        const auto [p0, pn] = space.block_range(prev);
        for (int c = p0; c < p0 + pn; ++c) b -= entry(row, c) * coeffs[static_cast<std::size_t>(c)];
      }
      rhs[static_cast<std::size_t>(r)] = b;
      for (int c = 0; c < ncol; ++c) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = entry(row, col0 + c);
    }
    const std::vector<T> x = detail::solve(std::move(a), rhs);
    for (int c = 0; c < ncol; ++c) coeffs[static_cast<std::size_t>(col0 + c)] = x[static_cast<std::size_t>(c)];
    solved.push_back(step.block);
  }
  return coeffs;
}

}  // namespace

PolyForm build_h2d_form(const MultiIndex& alpha, const Simplex& t) {
  const int n = t.dimension();
  if (alpha.ambient() != n) throw DomainError("multi-index and simplex dimensions differ");
  require_interior_degree(n, alpha.degree());
  Polynomial coeff(n);
  const MultiIndex beta = alpha.complement();
  for (int b : beta.entries()) coeff += centered_square(t, b);
  return PolyForm::basis(alpha, coeff);
}

PolyForm build_h2delta_form(const MultiIndex& alpha, const Simplex& t) {
  const int n = t.dimension();
  if (alpha.ambient() != n) throw DomainError("multi-index and simplex dimensions differ");
  require_interior_degree(n, alpha.degree());
  Polynomial coeff(n);
  for (int a : alpha.entries()) coeff += centered_square(t, a);
  return PolyForm::basis(alpha, coeff);
}

const char* to_string(ShapeBlock block) {
  switch (block) {
    case ShapeBlock::kP0: return "P0";
    case ShapeBlock::kKappa: return "KAPPA";
    case ShapeBlock::kStarKappa: return "STARKAPPA";
    case ShapeBlock::kH2d: return "H2D";
  }
  return "?";
}

ShapeSpace::ShapeSpace(int k, std::shared_ptr<const Simplex> simplex) : k_(k), simplex_(std::move(simplex)) {
  if (!simplex_) throw DomainError("shape space needs a simplex");
  const int n = simplex_->dimension();
  require_interior_degree(n, k);
  for (const auto& a : MultiIndex::enumerate(n, k)) {
    basis_.push_back(PolyForm::basis(a));
    blocks_.push_back(ShapeBlock::kP0);
  }
  for (const auto& a : MultiIndex::enumerate(n, k + 1)) {
    basis_.push_back(koszul(PolyForm::basis(a)));
    blocks_.push_back(ShapeBlock::kKappa);
  }
  for (const auto& a : MultiIndex::enumerate(n, k - 1)) {
    basis_.push_back(star_kappa_star(PolyForm::basis(a)));
    blocks_.push_back(ShapeBlock::kStarKappa);
  }
  for (const auto& a : MultiIndex::enumerate(n, k)) {
    basis_.push_back(build_h2d_form(a, *simplex_));
    blocks_.push_back(ShapeBlock::kH2d);
  }
}

std::pair<int, int> ShapeSpace::block_range(ShapeBlock block) const {
  int first = -1;
  int count = 0;
  for (int i = 0; i < dimension(); ++i) {
    if (blocks_[static_cast<std::size_t>(i)] != block) continue;
    if (first < 0) first = i;
    ++count;
  }
  return {first, count};
}

PolyForm ShapeSpace::combine(const std::vector<Rational>& coefficients) const {
  if (static_cast<int>(coefficients.size()) != dimension()) throw DomainError("coefficient count mismatch");
  PolyForm out(ambient(), k_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (coefficients[i] != 0) out += coefficients[i] * basis_[i];
  }
  return out;
}

PolyForm ShapeSpace::combine(const Eigen::VectorXd& coefficients) const {
  std::vector<Rational> exact(static_cast<std::size_t>(coefficients.size()));
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) exact[static_cast<std::size_t>(i)] = Rational(coefficients[i]);
  return combine(exact);
}

ShapeSpace build_shape_space(int n, int k, std::shared_ptr<const Simplex> t) {
  if (!t || t->dimension() != n) throw DomainError("simplex dimension does not match n");
  return ShapeSpace(k, std::move(t));
}

ShapeSpace build_shape_space(int n, int k, const Simplex& t) {
  return build_shape_space(n, k, std::make_shared<const Simplex>(t));
}

DofBasis build_dof_basis(const ShapeSpace& space, bool scaled) {
  const int n = space.ambient();
  const int k = space.degree();
  DofBasis dofs;
  if (scaled) dofs.kappa_scale = Rational(1) / Rational(space.simplex().diameter());
  for (const auto& a : MultiIndex::enumerate(n, k + 1)) dofs.eta.push_back(PolyForm::basis(a));
  dofs.eta_constant = static_cast<int>(dofs.eta.size());
  for (const auto& a : MultiIndex::enumerate(n, k)) {
    dofs.eta.push_back(dofs.kappa_scale * star_kappa_star(PolyForm::basis(a)));
  }
  for (const auto& a : MultiIndex::enumerate(n, k - 1)) dofs.tau.push_back(PolyForm::basis(a));
  dofs.tau_constant = static_cast<int>(dofs.tau.size());
  for (const auto& a : MultiIndex::enumerate(n, k)) dofs.tau.push_back(dofs.kappa_scale * koszul(PolyForm::basis(a)));
  return dofs;
}

std::vector<Rational> dof_values(const PolyForm& mu, const ShapeSpace& space, const DofBasis& dofs) {
  if (mu.ambient() != space.ambient() || mu.degree() != space.degree()) {
    throw DomainError("form does not match the shape space degree");
  }
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(dofs.size()));
  for (const auto& eta : dofs.eta) out.push_back(eta_functional(mu, eta, space.simplex()));
  for (const auto& tau : dofs.tau) out.push_back(tau_functional(mu, tau, space.simplex()));
  return out;
}

DofMatrix build_dof_matrix(const ShapeSpace& space, const DofBasis& dofs) {
  const auto m = static_cast<std::size_t>(dofs.size());
  const auto dim = static_cast<std::size_t>(space.dimension());
  if (m != dim) throw DomainError("DOF count differs from the shape space dimension");
  DofMatrix dm;
  dm.exact.assign(m, std::vector<Rational>(dim));
  dm.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    const std::vector<Rational> col = dof_values(space.basis()[j], space, dofs);
    for (std::size_t i = 0; i < m; ++i) {
      dm.exact[i][j] = col[i];
      dm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i].get_d();
    }
  }
  return dm;
}

std::vector<double> evaluate(const PolyForm& w, const Simplex& t, std::span<const double> x) {
  return detail::CompiledForm(w).evaluate(t.centered(x));
}

Eigen::VectorXd dof_values(const SmoothForm& mu, const ShapeSpace& space, const DofBasis& dofs, int quad_order) {
  if (!mu.value || !mu.d || !mu.delta) throw DomainError("smooth form is missing its value, d or delta callback");
  if (mu.ambient != space.ambient() || mu.degree != space.degree()) {
    throw DomainError("smooth form does not match the shape space degree");
  }
  const Simplex& t = space.simplex();
  const int n = space.ambient();
  const int k = space.degree();
  const auto nk = static_cast<std::size_t>(binomial(n, k));
  const auto nkp = static_cast<std::size_t>(binomial(n, k + 1));
  const auto nkm = static_cast<std::size_t>(binomial(n, k - 1));

  std::vector<detail::CompiledForm> eta, delta_eta, tau, d_tau;
  for (const auto& e : dofs.eta) {
    eta.emplace_back(e);
    delta_eta.emplace_back(codifferential(e));
  }
  for (const auto& s : dofs.tau) {
    tau.emplace_back(s);
    d_tau.emplace_back(exterior_derivative(s));
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.size());
  const QuadratureRule rule = quadrature_rule(t, quad_order);
  std::vector<double> a(std::max({nk, nkp, nkm})), b(a.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const std::vector<double>& x = rule.points[q];
    const std::vector<double> xc = t.centered(x);
    const std::vector<double> v = mu.value(x);
    const std::vector<double> dv = mu.d(x);
    const std::vector<double> sv = mu.delta(x);
    if (v.size() != nk || dv.size() != nkp || sv.size() != nkm) {
      throw DomainError("smooth form callback returned the wrong number of components");
    }
    const double w = rule.weights[q];
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < eta.size(); ++i, ++row) {
      eta[i].evaluate(xc, a.data());
      delta_eta[i].evaluate(xc, b.data());
      double s = 0.0;
      for (std::size_t c = 0; c < nkp; ++c) s += dv[c] * a[c];
      for (std::size_t c = 0; c < nk; ++c) s -= v[c] * b[c];
      out[row] += w * s;
    }
    for (std::size_t i = 0; i < tau.size(); ++i, ++row) {
      tau[i].evaluate(xc, a.data());
      d_tau[i].evaluate(xc, b.data());
      double s = 0.0;
      for (std::size_t c = 0; c < nkm; ++c) s += sv[c] * a[c];
      for (std::size_t c = 0; c < nk; ++c) s -= v[c] * b[c];
      out[row] += w * s;
    }
  }
  return out;
}

std::vector<Rational> solve_dofs(const DofMatrix& dm, const ShapeSpace& space, const DofBasis& dofs,
                                 const std::vector<Rational>& values, InterpolationMethod method) {
  if (method == InterpolationMethod::kDirect) return detail::solve(dm.exact, values);
  return four_step_solve<Rational>(space, dofs, values, [&](int r, int c) {
    return dm.exact[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  });
}

Eigen::VectorXd solve_dofs(const DofMatrix& dm, const ShapeSpace& space, const DofBasis& dofs,
                           const Eigen::VectorXd& values, InterpolationMethod method) {
  if (method == InterpolationMethod::kDirect) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(dm.values);
    if (!lu.isInvertible()) throw NumericalError("singular DOF matrix");
    return lu.solve(values);
  }
  const std::vector<double> v(values.data(), values.data() + values.size());
  const std::vector<double> c = four_step_solve<double>(space, dofs, v, [&](int r, int col) { return dm.values(r, col); });
  return Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
}

std::vector<Rational> interpolate_exact(const PolyForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                                        InterpolationMethod method) {
  return solve_dofs(build_dof_matrix(space, dofs), space, dofs, dof_values(mu, space, dofs), method);
}

Eigen::VectorXd interpolate_coefficients(const SmoothForm& mu, const ShapeSpace& space, const DofBasis& dofs,
                                         InterpolationMethod method, int quad_order) {
  return solve_dofs(build_dof_matrix(space, dofs), space, dofs, dof_values(mu, space, dofs, quad_order), method);
}

PolyForm interpolate(const PolyForm& mu, const ShapeSpace& space, const DofBasis& dofs, InterpolationMethod method) {
  return space.combine(interpolate_exact(mu, space, dofs, method));
}

PolyForm interpolate(const SmoothForm& mu, const ShapeSpace& space, const DofBasis& dofs, InterpolationMethod method,
                     int quad_order) {
  return space.combine(interpolate_coefficients(mu, space, dofs, method, quad_order));
}

}  // namespace nchodge

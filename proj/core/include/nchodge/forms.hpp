// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// Exact exterior algebra on polynomial differential forms over R^n.
//
// Forms are expanded in the canonical basis dx^alpha, alpha a strictly
// increasing multi-index, with polynomial coefficients over exact rationals.
// The polynomial variables are whatever coordinates the caller chooses; the
// element code always uses coordinates centered at a simplex barycenter, so
// `koszul` below is the centered Koszul operator of that simplex.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nchodge {

using Rational = mpq_class;

/// Largest supported ambient dimension. Exponent vectors carry one extra slot
/// so barycentric expansions (n + 1 variables) fit.
inline constexpr int kMaxDim = 7;

/// Strictly increasing tuple of axis numbers in {1, ..., n}.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Validates ordering and range; throws DomainError otherwise.
  MultiIndex(int ambient, std::vector<int> entries);

  static MultiIndex empty(int ambient) { return MultiIndex(ambient, {}); }
  static MultiIndex single(int ambient, int axis) { return MultiIndex(ambient, {axis}); }
  static MultiIndex full(int ambient);

  /// All multi-indices of the given length, in lexicographic order.
  static std::vector<MultiIndex> enumerate(int ambient, int degree);

  int ambient() const noexcept { return ambient_; }
  int degree() const noexcept { return static_cast<int>(entries_.size()); }
  std::span<const int> entries() const noexcept { return entries_; }
  int operator[](std::size_t i) const { return entries_[i]; }
  bool contains(int axis) const noexcept;

  /// Drops the entry at 0-based `position`.
  MultiIndex without(std::size_t position) const;
  /// Sorted set complement in {1, ..., n}.
  MultiIndex complement() const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  int ambient_ = 0;
  std::vector<int> entries_;
};

/// Sign s with star(dx^alpha) = s dx^beta, beta the complement of alpha.
int star_sign(const MultiIndex& alpha);

/// dx^a ^ dx^b = sign dx^merged. sign is 0 when the indices overlap.
std::pair<int, MultiIndex> merge(const MultiIndex& a, const MultiIndex& b);

int binomial(int n, int k);

using Exponent = std::array<std::uint8_t, kMaxDim + 1>;

/// Multivariate polynomial with exact rational coefficients. Variables are
/// numbered 1..nvars. Zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars);

  static Polynomial constant(int nvars, const Rational& value);
  /// The coordinate function x^axis (1-based).
  static Polynomial variable(int nvars, int axis);
  static Polynomial monomial(int nvars, const Exponent& exponent, const Rational& coeff);

  int nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept;
  const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
  Rational coefficient(const Exponent& exponent) const;

  Polynomial derivative(int axis) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate(std::span<const Rational> point) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scalar);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void add_term(const Exponent& exponent, const Rational& coeff);

  int nvars_ = 0;
  std::map<Exponent, Rational> terms_;
};

/// Polynomial k-form in n variables: sum over alpha of p_alpha dx^alpha.
class PolyForm {
 public:
  PolyForm() = default;
  PolyForm(int ambient, int degree);

  /// coeff * dx^alpha.
  static PolyForm basis(const MultiIndex& alpha, const Polynomial& coeff);
  static PolyForm basis(const MultiIndex& alpha);

  int ambient() const noexcept { return ambient_; }
  int degree() const noexcept { return degree_; }
  bool is_zero() const noexcept { return comps_.empty(); }
  const std::map<MultiIndex, Polynomial>& components() const noexcept { return comps_; }
  /// Zero polynomial when the component is absent.
  Polynomial component(const MultiIndex& alpha) const;
  /// Highest polynomial degree over all components; -1 for the zero form.
  int polynomial_degree() const noexcept;

  void add(const MultiIndex& alpha, const Polynomial& coeff);

  PolyForm& operator+=(const PolyForm& other);
  PolyForm& operator-=(const PolyForm& other);
  PolyForm& operator*=(const Rational& scalar);
  PolyForm& operator*=(const Polynomial& scalar_field);
  PolyForm operator-() const;

  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(PolyForm a, const Rational& s) { return a *= s; }
  friend PolyForm operator*(const Rational& s, PolyForm a) { return a *= s; }
  friend PolyForm operator*(const Polynomial& p, PolyForm a) { return a *= p; }
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.ambient_ == b.ambient_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
  }

  std::string to_string() const;

 private:
  void require_compatible(const PolyForm& other) const;

  int ambient_ = 0;
  int degree_ = 0;
  std::map<MultiIndex, Polynomial> comps_;
};

PolyForm wedge(const PolyForm& u, const PolyForm& v);
PolyForm hodge_star(const PolyForm& w);
/// Throws DomainError for top-degree input.
PolyForm exterior_derivative(const PolyForm& w);

/// Sign convention of the codifferential delta_k = s * star d star.
///
/// kAdjoint uses s = (-1)^{n(k+1)+1}, which makes delta the formal L2 adjoint
/// of d (in 2D: delta_1 = -div, delta_2 = curl). kPlainKn uses s = (-1)^{kn};
/// the two agree in odd dimension and differ by a sign in even dimension.
/// Everything downstream of forms_core uses kAdjoint.
enum class Codifferential { kAdjoint, kPlainKn };

int codifferential_sign(int ambient, int degree, Codifferential convention);

/// Throws DomainError for 0-forms.
PolyForm codifferential(const PolyForm& w, Codifferential convention = Codifferential::kAdjoint);

/// Contraction with the position field x = (x^1, ..., x^n) of the polynomial
/// variables. Throws DomainError for 0-forms.
PolyForm koszul(const PolyForm& w);

}  // namespace nchodge

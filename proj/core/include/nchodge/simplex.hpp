// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "nchodge/forms.hpp"

namespace nchodge {

using RationalPoint = std::vector<Rational>;

/// A nondegenerate n-simplex with exact rational vertices.
///
/// Binds the centered coordinates x~ = x - c (c the barycenter) in which all
/// element polynomials are written, and the second-moment constants
/// c^(j) = |T|^{-1} int_T (x~^j)^2. Vertices are reordered on construction
/// (first two swapped) when needed so the orientation is positive.
class Simplex {
 public:
  explicit Simplex(std::vector<RationalPoint> vertices);
  /// Doubles are converted exactly to rationals.
  static Simplex from_doubles(const std::vector<std::vector<double>>& vertices);

  int dimension() const noexcept { return n_; }
  const std::vector<RationalPoint>& vertices() const noexcept { return vertices_; }
  /// True when the input orientation was negative and two vertices were swapped.
  bool reordered() const noexcept { return reordered_; }

  const Rational& volume_exact() const noexcept { return volume_; }
  double volume() const { return volume_.get_d(); }
  const RationalPoint& barycenter() const noexcept { return barycenter_; }
  /// c^(j), j = 1..n stored 0-based.
  const std::vector<Rational>& second_moments() const noexcept { return second_moments_; }

  double diameter() const noexcept { return diameter_; }
  double inradius() const noexcept { return inradius_; }
  /// diameter / inradius.
  double shape_ratio() const noexcept { return diameter_ / inradius_; }

  /// Barycentric coordinate of vertex i (0-based, post-reordering) as a degree-1
  /// polynomial in centered coordinates.
  const Polynomial& barycentric(int i) const { return barycentric_.at(static_cast<std::size_t>(i)); }

  /// x - c for a physical point.
  std::vector<double> centered(std::span<const double> x) const;

  /// Exact integral over the simplex of a polynomial in centered coordinates.
  Rational integrate_exact(const Polynomial& p) const;
  double integrate(const Polynomial& p) const { return integrate_exact(p).get_d(); }

 private:
  Rational monomial_moment(const Exponent& e) const;

  int n_ = 0;
  std::vector<RationalPoint> vertices_;
  bool reordered_ = false;
  Rational volume_;
  RationalPoint barycenter_;
  std::vector<Rational> second_moments_;
  std::vector<double> barycenter_d_;
  double diameter_ = 0.0;
  double inradius_ = 0.0;
  std::vector<Polynomial> barycentric_;
  // int_T x~^e for |e| <= kCachedDegree.
  std::map<Exponent, Rational> moments_;
};

/// Exact L2 inner product of two forms of equal degree over T.
Rational l2_inner_exact(const PolyForm& u, const PolyForm& v, const Simplex& t);
double l2_inner(const PolyForm& u, const PolyForm& v, const Simplex& t);

/// |w|_{H^1(T)}^2 summed over components and partial derivatives.
double h1_seminorm_squared(const PolyForm& w, const Simplex& t);

/// A symmetric quadrature rule mapped to a physical simplex.
struct QuadratureRule {
  int order = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

inline constexpr int kMinQuadratureOrder = 2;
inline constexpr int kMaxQuadratureOrder = 16;
inline constexpr int kDefaultQuadratureOrder = 6;

/// Grundmann-Moeller rule exact for polynomials of degree >= order
/// (order in [2, 10]; throws DomainError otherwise).
QuadratureRule quadrature_rule(const Simplex& t, int order);

/// Pointwise evaluator of a smooth form: physical point -> components in
/// lexicographic multi-index order.
using FormField = std::function<std::vector<double>(std::span<const double>)>;

/// Componentwise integrals of a smooth field over T.
std::vector<double> quadrature(const FormField& f, const Simplex& t, int order);

}  // namespace nchodge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

constexpr int kCachedDegree = 4;

using RationalMatrix = std::vector<std::vector<Rational>>;

Rational factorial(int m) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
  return Rational(f);
}

// Determinant by fraction-free-enough Gaussian elimination over Q.
Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return det;
}

RationalMatrix inverse(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw NumericalError("singular barycentric system");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= factor * a[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

double gram_volume(const std::vector<std::vector<double>>& edges) {
  // sqrt(det(E E^T)) for the parallelotope spanned by the rows of E.
  const std::size_t m = edges.size();
  std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t c = 0; c < edges[i].size(); ++c) g[i][j] += edges[i][c] * edges[j][c];
    }
  }
  double det = 1.0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(g[r][col]) > std::abs(g[pivot][col])) pivot = r;
    }
    std::swap(g[pivot], g[col]);
    if (g[col][col] == 0.0) return 0.0;
    det *= g[col][col];
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = g[r][col] / g[col][col];
      for (std::size_t c = col; c < m; ++c) g[r][c] -= f * g[col][c];
    }
  }
  return std::sqrt(std::abs(det));
}

void for_each_exponent(int nvars, int max_degree, const std::function<void(const Exponent&)>& fn) {
  Exponent e{};
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (var == nvars) {
      fn(e);
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(p);
      rec(var + 1, remaining - p);
    }
    e[static_cast<std::size_t>(var)] = 0;
  };
  rec(0, max_degree);
}

}  // namespace

Simplex::Simplex(std::vector<RationalPoint> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw DomainError("a simplex needs at least two vertices");
  n_ = static_cast<int>(vertices_.size()) - 1;
  if (n_ > kMaxDim) throw DomainError("simplex dimension exceeds the supported maximum");
  for (const auto& v : vertices_) {
    if (static_cast<int>(v.size()) != n_) throw DomainError("simplex vertices must have n coordinates");
  }
  const auto un = static_cast<std::size_t>(n_);

  RationalMatrix edges(un, std::vector<Rational>(un));
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = 0; j < un; ++j) edges[i][j] = vertices_[i + 1][j] - vertices_[0][j];
  }
  Rational det = determinant(edges);
  if (det == 0) throw DomainError("degenerate simplex (zero volume)");
  if (det < 0) {
    if (n_ == 1) {
      std::swap(vertices_[0], vertices_[1]);
    } else {
      std::swap(vertices_[1], vertices_[2]);
    }
    reordered_ = true;
    det = -det;
  }
  volume_ = det / factorial(n_);

  barycenter_.assign(un, Rational(0));
  for (const auto& v : vertices_) {
    for (std::size_t j = 0; j < un; ++j) barycenter_[j] += v[j];
  }
  for (auto& c : barycenter_) c /= n_ + 1;
  barycenter_d_.resize(un);
  for (std::size_t j = 0; j < un; ++j) barycenter_d_[j] = barycenter_[j].get_d();

  // Barycentric coordinates in centered variables: solve [v_i - c; 1] lambda = [x~; 1].
  RationalMatrix m(un + 1, std::vector<Rational>(un + 1));
  for (std::size_t i = 0; i <= un; ++i) {
    for (std::size_t j = 0; j < un; ++j) m[j][i] = vertices_[i][j] - barycenter_[j];
    m[un][i] = 1;
  }
  const RationalMatrix minv = inverse(m);
  barycentric_.reserve(un + 1);
  for (std::size_t i = 0; i <= un; ++i) {
    Polynomial lam = Polynomial::constant(n_, minv[i][un]);
    for (std::size_t j = 0; j < un; ++j) {
      lam += Polynomial::variable(n_, static_cast<int>(j) + 1) * minv[i][j];
    }
    barycentric_.push_back(std::move(lam));
  }

  for_each_exponent(n_, kCachedDegree, [&](const Exponent& e) { moments_.emplace(e, monomial_moment(e)); });

  second_moments_.resize(un);
  for (std::size_t j = 0; j < un; ++j) {
    Exponent e{};
    e[j] = 2;
    second_moments_[j] = moments_.at(e) / volume_;
  }

  std::vector<std::vector<double>> vd(vertices_.size(), std::vector<double>(un));
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = 0; j < un; ++j) vd[i][j] = vertices_[i][j].get_d();
  }
  for (std::size_t a = 0; a < vd.size(); ++a) {
    for (std::size_t b = a + 1; b < vd.size(); ++b) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < un; ++j) d2 += (vd[a][j] - vd[b][j]) * (vd[a][j] - vd[b][j]);
      diameter_ = std::max(diameter_, std::sqrt(d2));
    }
  }
  if (n_ == 1) {
    inradius_ = diameter_ / 2.0;
  } else {
    double facet_sum = 0.0;
    for (std::size_t skip = 0; skip < vd.size(); ++skip) {
      std::vector<std::size_t> ids;
      for (std::size_t i = 0; i < vd.size(); ++i) {
        if (i != skip) ids.push_back(i);
      }
      std::vector<std::vector<double>> fe;
      for (std::size_t i = 1; i < ids.size(); ++i) {
        std::vector<double> e(un);
        for (std::size_t j = 0; j < un; ++j) e[j] = vd[ids[i]][j] - vd[ids[0]][j];
        fe.push_back(std::move(e));
      }
      facet_sum += gram_volume(fe) / factorial(n_ - 1).get_d();
    }
    inradius_ = n_ * volume() / facet_sum;
  }
}

Simplex Simplex::from_doubles(const std::vector<std::vector<double>>& vertices) {
  std::vector<RationalPoint> rv;
  rv.reserve(vertices.size());
  for (const auto& v : vertices) {
    RationalPoint p;
    p.reserve(v.size());
    for (double x : v) {
      if (!std::isfinite(x)) throw DomainError("non-finite vertex coordinate");
      p.emplace_back(x);
    }
    rv.push_back(std::move(p));
  }
  return Simplex(std::move(rv));
}

std::vector<double> Simplex::centered(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j] - barycenter_d_[j];
  return out;
}

Rational Simplex::monomial_moment(const Exponent& e) const {
  // x~_j = sum_i (v_i - c)_j lambda_i, then int_T prod lambda^a = n! |T| prod a_i! / (|a| + n)!.
  const int nb = n_ + 1;
  Polynomial expanded = Polynomial::constant(nb, 1);
  for (int j = 0; j < n_; ++j) {
    const int power = e[static_cast<std::size_t>(j)];
    if (power == 0) continue;
    Polynomial linear(nb);
    for (int i = 0; i < nb; ++i) {
      linear += Polynomial::variable(nb, i + 1) *
                Rational(vertices_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                         barycenter_[static_cast<std::size_t>(j)]);
    }
    for (int p = 0; p < power; ++p) expanded = expanded * linear;
  }
  Rational sum = 0;
  for (const auto& [a, coeff] : expanded.terms()) {
    Rational num = 1;
    int total = 0;
    for (int i = 0; i < nb; ++i) {
      num *= factorial(a[static_cast<std::size_t>(i)]);
      total += a[static_cast<std::size_t>(i)];
    }
    sum += coeff * num / factorial(total + n_);
  }
  return sum * factorial(n_) * volume_;
}

Rational Simplex::integrate_exact(const Polynomial& p) const {
  if (p.is_zero()) return 0;
  if (p.nvars() != n_) throw DomainError("integrand must be a polynomial in the simplex's n variables");
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) {
    auto it = moments_.find(e);
    sum += c * (it != moments_.end() ? it->second : monomial_moment(e));
  }
  return sum;
}

Rational l2_inner_exact(const PolyForm& u, const PolyForm& v, const Simplex& t) {
  if (u.degree() != v.degree() || u.ambient() != v.ambient()) {
    throw DomainError("L2 inner product of forms of different degree");
  }
  if (u.ambient() != t.dimension()) throw DomainError("form and simplex dimensions differ");
  Rational sum = 0;
  auto iu = u.components().begin();
  auto iv = v.components().begin();
  while (iu != u.components().end() && iv != v.components().end()) {
    if (iu->first < iv->first) {
      ++iu;
    } else if (iv->first < iu->first) {
      ++iv;
    } else {
      sum += t.integrate_exact(iu->second * iv->second);
      ++iu;
      ++iv;
    }
  }
  return sum;
}

double l2_inner(const PolyForm& u, const PolyForm& v, const Simplex& t) {
  return l2_inner_exact(u, v, t).get_d();
}

double h1_seminorm_squared(const PolyForm& w, const Simplex& t) {
  Rational sum = 0;
  for (const auto& [a, p] : w.components()) {
    for (int j = 1; j <= w.ambient(); ++j) {
      const Polynomial dp = p.derivative(j);
      sum += t.integrate_exact(dp * dp);
    }
  }
  return sum.get_d();
}

QuadratureRule quadrature_rule(const Simplex& t, int order) {
  if (order < kMinQuadratureOrder || order > kMaxQuadratureOrder) {
    throw DomainError("quadrature order " + std::to_string(order) + " outside [" +
                      std::to_string(kMinQuadratureOrder) + ", " + std::to_string(kMaxQuadratureOrder) + "]");
  }
  const int n = t.dimension();
  const int s = order / 2;  // exact through degree 2s + 1 >= order
  const int parts = n + 1;

  std::vector<std::vector<double>> vd(static_cast<std::size_t>(parts), std::vector<double>(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < vd.size(); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) vd[i][j] = t.vertices()[i][j].get_d();
  }

  QuadratureRule rule;
  rule.order = order;
  const Rational scale = factorial(n) * t.volume_exact();
  for (int i = 0; i <= s; ++i) {
    const int m = n + 1 + 2 * s - 2 * i;
    mpz_class mpow;
    mpz_ui_pow_ui(mpow.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(2 * s + 1));
    mpz_class two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(2 * s));
    Rational w = Rational(mpow) / (Rational(two_pow) * factorial(i) * factorial(n + 2 * s - i + 1));
    if (i % 2 == 1) w = -w;
    const double weight = Rational(w * scale).get_d();

    // Compositions of s - i into n + 1 parts.
    std::vector<int> beta(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> rec = [&](int idx, int remaining) {
      if (idx == parts - 1) {
        beta[static_cast<std::size_t>(idx)] = remaining;
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (int v = 0; v < parts; ++v) {
          const double lam = (2.0 * beta[static_cast<std::size_t>(v)] + 1.0) / m;
          for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] += lam * vd[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
        }
        rule.points.push_back(std::move(x));
        rule.weights.push_back(weight);
        return;
      }
      for (int b = 0; b <= remaining; ++b) {
        beta[static_cast<std::size_t>(idx)] = b;
        rec(idx + 1, remaining - b);
      }
    };
    rec(0, s - i);
  }
  return rule;
}

std::vector<double> quadrature(const FormField& f, const Simplex& t, int order) {
  const QuadratureRule rule = quadrature_rule(t, order);
  std::vector<double> sum;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const std::vector<double> value = f(rule.points[q]);
    if (sum.empty()) sum.assign(value.size(), 0.0);
    if (value.size() != sum.size()) throw DomainError("form field returned a varying number of components");
    for (std::size_t c = 0; c < value.size(); ++c) sum[c] += rule.weights[q] * value[c];
  }
  return sum;
}

}  // namespace nchodge

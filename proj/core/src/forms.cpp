// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/forms.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

void require_ambient(int ambient) {
  if (ambient < 0 || ambient > kMaxDim) {
    throw DomainError("ambient dimension " + std::to_string(ambient) + " outside [0, " +
                      std::to_string(kMaxDim) + "]");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(int ambient, std::vector<int> entries)
    : ambient_(ambient), entries_(std::move(entries)) {
  require_ambient(ambient);
  if (static_cast<int>(entries_.size()) > ambient) {
    throw DomainError("multi-index longer than the ambient dimension");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 1 || entries_[i] > ambient) {
      throw DomainError("multi-index entry " + std::to_string(entries_[i]) + " outside [1, " +
                        std::to_string(ambient) + "]");
    }
    if (i > 0 && entries_[i - 1] >= entries_[i]) {
      throw DomainError("multi-index entries must be strictly increasing");
    }
  }
}

MultiIndex MultiIndex::full(int ambient) {
  std::vector<int> all(static_cast<std::size_t>(std::max(ambient, 0)));
  std::iota(all.begin(), all.end(), 1);
  return MultiIndex(ambient, std::move(all));
}

std::vector<MultiIndex> MultiIndex::enumerate(int ambient, int degree) {
  require_ambient(ambient);
  std::vector<MultiIndex> out;
  if (degree < 0 || degree > ambient) return out;
  std::vector<int> cur(static_cast<std::size_t>(degree));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.emplace_back(ambient, cur);
    int i = degree - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == ambient - degree + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < degree; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

bool MultiIndex::contains(int axis) const noexcept {
  return std::binary_search(entries_.begin(), entries_.end(), axis);
}

MultiIndex MultiIndex::without(std::size_t position) const {
  if (position >= entries_.size()) throw DomainError("multi-index position out of range");
  std::vector<int> rest;
  rest.reserve(entries_.size() - 1);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i != position) rest.push_back(entries_[i]);
  }
  return MultiIndex(ambient_, std::move(rest));
}

MultiIndex MultiIndex::complement() const {
  std::vector<int> rest;
  for (int j = 1; j <= ambient_; ++j) {
    if (!contains(j)) rest.push_back(j);
  }
  return MultiIndex(ambient_, std::move(rest));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries_[i]);
  }
  return s + ")";
}

int star_sign(const MultiIndex& alpha) {
  const int k = alpha.degree();
  const int pm = std::accumulate(alpha.entries().begin(), alpha.entries().end(), 0) - k * (k + 1) / 2;
  int sign = (pm % 2 == 0) ? 1 : -1;
#ifdef NCHODGE_MUTATE_STAR_SIGN
  // Fault injection for the verification suite's mutation test only.
  if (k == 1 && alpha[0] == 1) sign = -sign;
#endif
  return sign;
}

std::pair<int, MultiIndex> merge(const MultiIndex& a, const MultiIndex& b) {
  if (a.ambient() != b.ambient()) throw DomainError("merging multi-indices of different ambient dimension");
  int inversions = 0;
  for (int x : a.entries()) {
    for (int y : b.entries()) {
      if (x == y) return {0, MultiIndex::empty(a.ambient())};
      if (x > y) ++inversions;
    }
  }
  std::vector<int> all(a.entries().begin(), a.entries().end());
  all.insert(all.end(), b.entries().begin(), b.entries().end());
  std::sort(all.begin(), all.end());
  return {(inversions % 2 == 0) ? 1 : -1, MultiIndex(a.ambient(), std::move(all))};
}

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 0 || nvars > kMaxDim + 1) throw DomainError("polynomial variable count out of range");
}

Polynomial Polynomial::constant(int nvars, const Rational& value) {
  Polynomial p(nvars);
  p.add_term(Exponent{}, value);
  return p;
}

Polynomial Polynomial::variable(int nvars, int axis) {
  if (axis < 1 || axis > nvars) throw DomainError("polynomial variable index out of range");
  Exponent e{};
  e[static_cast<std::size_t>(axis - 1)] = 1;
  return monomial(nvars, e, 1);
}

Polynomial Polynomial::monomial(int nvars, const Exponent& exponent, const Rational& coeff) {
  Polynomial p(nvars);
  for (std::size_t i = static_cast<std::size_t>(nvars); i < exponent.size(); ++i) {
    if (exponent[i] != 0) throw DomainError("monomial uses a variable beyond nvars");
  }
  p.add_term(exponent, coeff);
  return p;
}

int Polynomial::degree() const noexcept {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto v : e) d += v;
    deg = std::max(deg, d);
  }
  return deg;
}

Rational Polynomial::coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponent& exponent, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(int axis) const {
  if (axis < 1 || axis > nvars_) throw DomainError("derivative axis out of range");
  const auto i = static_cast<std::size_t>(axis - 1);
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent de = e;
    --de[i];
    out.add_term(de, c * static_cast<unsigned long>(e[i]));
  }
  return out;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) < nvars_) throw DomainError("evaluation point has too few coordinates");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (int j = 0; j < nvars_; ++j) {
      for (int p = 0; p < e[static_cast<std::size_t>(j)]; ++p) term *= point[static_cast<std::size_t>(j)];
    }
    sum += term;
  }
  return sum;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) < nvars_) throw DomainError("evaluation point has too few coordinates");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int j = 0; j < nvars_; ++j) {
      for (int p = 0; p < e[static_cast<std::size_t>(j)]; ++p) term *= point[static_cast<std::size_t>(j)];
    }
    sum += term;
  }
  return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (is_zero() && nvars_ == 0) nvars_ = other.nvars_;
  if (!other.is_zero() && other.nvars_ != nvars_) throw DomainError("adding polynomials in different variables");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (is_zero() && nvars_ == 0) nvars_ = other.nvars_;
  if (!other.is_zero() && other.nvars_ != nvars_) throw DomainError("subtracting polynomials in different variables");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (!a.is_zero() && !b.is_zero() && a.nvars_ != b.nvars_) {
    throw DomainError("multiplying polynomials in different variables");
  }
  Polynomial out(std::max(a.nvars_, b.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e{};
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (int j = 0; j < nvars_; ++j) {
      const int p = e[static_cast<std::size_t>(j)];
      if (p == 0) continue;
      os << "*x" << (j + 1);
      if (p > 1) os << "^" << p;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// PolyForm

PolyForm::PolyForm(int ambient, int degree) : ambient_(ambient), degree_(degree) {
  require_ambient(ambient);
  if (degree < 0 || degree > ambient) throw DomainError("form degree outside [0, n]");
}

PolyForm PolyForm::basis(const MultiIndex& alpha, const Polynomial& coeff) {
  PolyForm f(alpha.ambient(), alpha.degree());
  f.add(alpha, coeff);
  return f;
}

PolyForm PolyForm::basis(const MultiIndex& alpha) {
  return basis(alpha, Polynomial::constant(alpha.ambient(), 1));
}

Polynomial PolyForm::component(const MultiIndex& alpha) const {
  auto it = comps_.find(alpha);
  return it == comps_.end() ? Polynomial(ambient_) : it->second;
}

int PolyForm::polynomial_degree() const noexcept {
  int deg = -1;
  for (const auto& [a, p] : comps_) deg = std::max(deg, p.degree());
  return deg;
}

void PolyForm::add(const MultiIndex& alpha, const Polynomial& coeff) {
  if (alpha.ambient() != ambient_ || alpha.degree() != degree_) {
    throw DomainError("component " + alpha.to_string() + " does not fit a " + std::to_string(degree_) +
                      "-form in dimension " + std::to_string(ambient_));
  }
  if (coeff.is_zero()) return;
  if (coeff.nvars() != ambient_) throw DomainError("form coefficient must be a polynomial in n variables");
  auto [it, inserted] = comps_.try_emplace(alpha, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

void PolyForm::require_compatible(const PolyForm& other) const {
  if (other.ambient_ != ambient_ || other.degree_ != degree_) {
    throw DomainError("forms of different degree or ambient dimension");
  }
}

PolyForm& PolyForm::operator+=(const PolyForm& other) {
  require_compatible(other);
  for (const auto& [a, p] : other.comps_) add(a, p);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& other) {
  require_compatible(other);
  for (const auto& [a, p] : other.comps_) add(a, -p);
  return *this;
}

PolyForm& PolyForm::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    comps_.clear();
    return *this;
  }
  for (auto& [a, p] : comps_) p *= scalar;
  return *this;
}

PolyForm& PolyForm::operator*=(const Polynomial& scalar_field) {
  std::map<MultiIndex, Polynomial> scaled;
  for (const auto& [a, p] : comps_) {
    Polynomial q = p * scalar_field;
    if (!q.is_zero()) scaled.emplace(a, std::move(q));
  }
  comps_ = std::move(scaled);
  return *this;
}

PolyForm PolyForm::operator-() const {
  PolyForm out = *this;
  out *= Rational(-1);
  return out;
}

std::string PolyForm::to_string() const {
  if (comps_.empty()) return "0";
  std::string s;
  for (const auto& [a, p] : comps_) {
    if (!s.empty()) s += " + ";
    s += "(" + p.to_string() + ") dx" + a.to_string();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Operators

PolyForm wedge(const PolyForm& u, const PolyForm& v) {
  if (u.ambient() != v.ambient()) throw DomainError("wedge of forms in different dimensions");
  if (u.degree() + v.degree() > u.ambient()) throw DomainError("wedge product degree exceeds ambient dimension");
  PolyForm out(u.ambient(), u.degree() + v.degree());
  for (const auto& [a, p] : u.components()) {
    for (const auto& [b, q] : v.components()) {
      auto [sign, ab] = merge(a, b);
      if (sign == 0) continue;
      out.add(ab, (p * q) * Rational(sign));
    }
  }
  return out;
}

PolyForm hodge_star(const PolyForm& w) {
  PolyForm out(w.ambient(), w.ambient() - w.degree());
  for (const auto& [a, p] : w.components()) {
    out.add(a.complement(), p * Rational(star_sign(a)));
  }
  return out;
}

PolyForm exterior_derivative(const PolyForm& w) {
  const int n = w.ambient();
  if (w.degree() >= n) throw DomainError("exterior derivative of a top-degree form");
  PolyForm out(n, w.degree() + 1);
  for (const auto& [a, p] : w.components()) {
    for (int j = 1; j <= n; ++j) {
      if (a.contains(j)) continue;
      Polynomial dp = p.derivative(j);
      if (dp.is_zero()) continue;
      auto [sign, ja] = merge(MultiIndex::single(n, j), a);
      out.add(ja, dp * Rational(sign));
    }
  }
  return out;
}

int codifferential_sign(int ambient, int degree, Codifferential convention) {
  const int exponent = convention == Codifferential::kPlainKn ? degree * ambient
                                                              : ambient * (degree + 1) + 1;
  return exponent % 2 == 0 ? 1 : -1;
}

PolyForm codifferential(const PolyForm& w, Codifferential convention) {
  if (w.degree() == 0) throw DomainError("codifferential of a 0-form");
  PolyForm out = hodge_star(exterior_derivative(hodge_star(w)));
  out *= Rational(codifferential_sign(w.ambient(), w.degree(), convention));
  return out;
}

PolyForm koszul(const PolyForm& w) {
  const int n = w.ambient();
  if (w.degree() == 0) throw DomainError("Koszul operator of a 0-form");
  PolyForm out(n, w.degree() - 1);
  for (const auto& [a, p] : w.components()) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(a.degree()); ++j) {
      Polynomial term = Polynomial::variable(n, a[j]) * p;
      if (j % 2 == 1) term = -term;
      out.add(a.without(j), term);
    }
  }
  return out;
}

}  // namespace nchodge

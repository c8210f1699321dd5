// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// Small dense Gauss-Jordan helpers shared by the exact (rational) paths.

#include <cmath>
#include <type_traits>
#include <vector>

#include "nchodge/error.hpp"
#include "nchodge/forms.hpp"

namespace nchodge::detail {

template <class T>
using Dense = std::vector<std::vector<T>>;

template <class T>
bool is_zero_pivot(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return v == T(0);
  } else {
    return sgn(v) == 0;
  }
}

template <class T>
std::size_t choose_pivot(const Dense<T>& a, std::size_t col, std::size_t from) {
  std::size_t best = from;
  if constexpr (std::is_floating_point_v<T>) {
    for (std::size_t r = from + 1; r < a.size(); ++r) {
      if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    }
  } else {
    while (best < a.size() && is_zero_pivot(a[best][col])) ++best;
    if (best == a.size()) best = from;
  }
  return best;
}

/// Solves a X = b in place for square a; b has any number of columns.
template <class T>
Dense<T> solve(Dense<T> a, Dense<T> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t p = choose_pivot(a, col, col);
    if (is_zero_pivot(a[p][col])) throw NumericalError("singular local system");
    std::swap(a[p], a[col]);
    std::swap(b[p], b[col]);
    const T pivot = a[col][col];
    for (auto& v : a[col]) v /= pivot;
    for (auto& v : b[col]) v /= pivot;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_zero_pivot(a[r][col])) continue;
      const T f = a[r][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      for (std::size_t c = 0; c < b[r].size(); ++c) b[r][c] -= f * b[col][c];
    }
  }
  return b;
}

template <class T>
std::vector<T> solve(Dense<T> a, const std::vector<T>& rhs) {
  Dense<T> b(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) b[i] = {rhs[i]};
  const Dense<T> x = solve(std::move(a), std::move(b));
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i][0];
  return out;
}

template <class T>
Dense<T> identity(std::size_t n) {
  Dense<T> id(n, std::vector<T>(n, T(0)));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = T(1);
  return id;
}

}  // namespace nchodge::detail

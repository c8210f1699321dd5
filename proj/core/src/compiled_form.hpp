// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// Floating copy of a PolyForm for fast pointwise evaluation in quadrature loops.

#include <span>
#include <vector>

#include "nchodge/forms.hpp"

namespace nchodge::detail {

class CompiledForm {
 public:
  CompiledForm() = default;
  explicit CompiledForm(const PolyForm& w) : n_(w.ambient()), k_(w.degree()) {
    const auto alphas = MultiIndex::enumerate(n_, k_);
    comps_.resize(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const Polynomial p = w.component(alphas[i]);
      for (const auto& [e, c] : p.terms()) comps_[i].push_back({e, c.get_d()});
    }
  }

  std::size_t size() const noexcept { return comps_.size(); }

  /// xc are centered coordinates; writes size() values.
  void evaluate(std::span<const double> xc, double* out) const {
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      double sum = 0.0;
      for (const auto& [e, c] : comps_[i]) {
        double term = c;
        for (int j = 0; j < n_; ++j) {
          for (int p = 0; p < e[static_cast<std::size_t>(j)]; ++p) term *= xc[static_cast<std::size_t>(j)];
        }
        sum += term;
      }
      out[i] = sum;
    }
  }

  std::vector<double> evaluate(std::span<const double> xc) const {
    std::vector<double> out(comps_.size());
    evaluate(xc, out.data());
    return out;
  }

 private:
  struct Term {
    Exponent exponent;
    double coeff;
  };
  int n_ = 0;
  int k_ = 0;
  std::vector<std::vector<Term>> comps_;
};

}  // namespace nchodge::detail

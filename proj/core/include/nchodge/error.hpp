// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nchodge {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad degree, dimension mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A mesh failed validation. Carries the kind and id of the offending entity.
class MeshError : public Error {
 public:
  MeshError(std::string entity, long id, const std::string& what)
      : Error(what + " (" + entity + " " + std::to_string(id) + ")"),
        entity_(std::move(entity)),
        id_(id) {}

  const std::string& entity() const noexcept { return entity_; }
  long id() const noexcept { return id_; }

 private:
  std::string entity_;
  long id_;
};

/// A linear algebra step failed: singular local system, CG stagnation, ...
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> residuals = {})
      : Error(what), residuals_(std::move(residuals)) {}

  /// Relative residual history of an iterative solve, empty for direct failures.
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace nchodge

// Copyright 2026 The twcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace twcv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its physical or mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mode bookkeeping failure: unknown, duplicate or mismatched labels.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// The eavesdropper variance diverges (T = 1 with nonzero excess noise).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A covariance matrix violates the uncertainty principle.
class UnphysicalStateError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on a quadrature with zero variance.
class DegenerateMeasurementError : public Error {
 public:
  using Error::Error;
};

/// An eigen-solver or factorisation did not produce a usable result.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, Eigen::MatrixXd offending)
      : Error(what), matrix_(std::move(offending)) {}

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

/// Root bracketing or bisection failed; carries the endpoint values.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : Error(what), lo_(lo), hi_(hi), f_lo_(f_lo), f_hi_(f_hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }

 private:
  double lo_, hi_, f_lo_, f_hi_;
};

}  // namespace twcv

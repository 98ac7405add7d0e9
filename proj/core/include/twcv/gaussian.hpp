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

// Gaussian-state algebra for zero-mean states in shot-noise units.
//
// Quadratures are ordered (x1, p1, x2, p2, ...). Modes carry string labels
// so that transforms can target any subset of modes of a larger state.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "twcv/errors.hpp"

namespace twcv {

using Matrix = Eigen::MatrixXd;

enum class Quadrature { x, p };

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kPhysicalTolerance = 1e-9;
inline constexpr double kSpectrumPairTolerance = 1e-8;

/// Block-diagonal symplectic form over n modes.
Matrix symplectic_form(std::size_t n_modes);

/// Covariance matrix of a labelled multimode Gaussian state.
///
/// The matrix is stored symmetrized; construction rejects inputs whose
/// asymmetry exceeds kSymmetryTolerance relative to the largest entry.
class CovarianceMatrix {
 public:
  CovarianceMatrix(std::vector<std::string> modes, Matrix data);

  const std::vector<std::string>& modes() const noexcept { return modes_; }
  const Matrix& data() const noexcept { return data_; }
  std::size_t mode_count() const noexcept { return modes_.size(); }

  bool has_mode(std::string_view label) const noexcept;
  /// Position of `label` in the mode list. Throws ModeError if absent.
  std::size_t index_of(std::string_view label) const;

  /// Second moment <q_a q_b> between two labelled quadratures.
  double covariance(std::string_view mode_a, Quadrature qa, std::string_view mode_b,
                    Quadrature qb) const;
  double variance(std::string_view mode, Quadrature q) const {
    return covariance(mode, q, mode, q);
  }

  /// Reduced state on `modes`, in the order given.
  CovarianceMatrix restrict_to(std::span<const std::string> modes) const;
  CovarianceMatrix restrict_to(std::initializer_list<std::string> modes) const {
    return restrict_to(std::span<const std::string>(modes.begin(), modes.size()));
  }

  /// Same state with one mode renamed.
  CovarianceMatrix relabel(std::string_view from, std::string to) const;

  /// Smallest symplectic eigenvalue is at least 1 - kPhysicalTolerance.
  bool is_physical() const;

 private:
  std::vector<std::string> modes_;
  Matrix data_;
};

/// Square matrix S with S Omega S^T = Omega acting on 2 * n quadratures.
class SymplecticTransform {
 public:
  /// Throws DomainError if `data` is not square, has odd size, or is not
  /// symplectic within kSymplecticTolerance.
  explicit SymplecticTransform(Matrix data);

  const Matrix& data() const noexcept { return data_; }
  std::size_t mode_count() const noexcept { return static_cast<std::size_t>(data_.rows() / 2); }

  /// max |S Omega S^T - Omega|.
  double symplectic_defect() const;

 private:
  Matrix data_;
};

/// Symplectic eigenvalues, sorted descending.
struct SymplecticSpectrum {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double min() const;
};

// State constructors.

CovarianceMatrix vacuum_state(std::vector<std::string> modes);
/// Two-mode squeezed vacuum of variance V >= 1 on (mode_a, mode_b).
CovarianceMatrix epr_state(double variance, std::string mode_a, std::string mode_b);
/// Single-mode thermal state v * I2.
CovarianceMatrix thermal_state(double variance, std::string mode);

/// Direct sum; mode list is a's followed by b's. Throws ModeError on overlap.
CovarianceMatrix tensor(const CovarianceMatrix& a, const CovarianceMatrix& b);

// Transform constructors. Matrices are written in (x1, p1, x2, p2) order.

SymplecticTransform identity_transform(std::size_t n_modes);
/// [[sqrt(T) I, sqrt(1-T) I], [-sqrt(1-T) I, sqrt(T) I]], 0 <= T <= 1.
SymplecticTransform beam_splitter(double transmittance);
/// Phase-sensitive amplifier diag(sqrt(g), 1/sqrt(g)), g >= 1.
SymplecticTransform psa(double gain);
/// Phase-insensitive amplifier coupling signal and ancilla through sqrt(g-1) sigma_z.
SymplecticTransform pia(double gain);
/// Estimator gate producing x1 - k x2 on the first output.
SymplecticTransform cnot_x(double k);
/// Estimator gate producing p1 + k p2 on the first output.
SymplecticTransform cnot_p(double k);

/// Congruence S gamma S^T with S embedded on `targets` and identity elsewhere.
///
/// `targets` may be any distinct subset of the state's modes in any order;
/// S sees them in the order given. If `outputs` is non-empty the target modes
/// are renamed to it position by position.
CovarianceMatrix apply(const SymplecticTransform& transform, const CovarianceMatrix& state,
                       std::span<const std::string> targets,
                       std::span<const std::string> outputs = {});
CovarianceMatrix apply(const SymplecticTransform& transform, const CovarianceMatrix& state,
                       std::initializer_list<std::string> targets,
                       std::initializer_list<std::string> outputs = {});

/// Gaussian conditioning on an ideal homodyne measurement of one quadrature.
///
/// gamma' = gamma_A - sigma^T (X gamma_B X)^- sigma with X = diag(1,0) for x
/// and diag(0,1) for p; the measured mode is removed. Throws
/// DegenerateMeasurementError when the measured variance is not positive.
CovarianceMatrix homodyne_condition(const CovarianceMatrix& state, std::string_view mode,
                                    Quadrature quadrature);

/// Moduli of the eigenvalues of i Omega gamma, one per mode.
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& state);
SymplecticSpectrum symplectic_spectrum(const Matrix& gamma);

/// g(x) = (x+1) log2(x+1) - x log2 x with g(0) = 0.
double entropy_function(double x);

/// Entropy in bits of a spectrum; rejects values below 1 - kPhysicalTolerance.
double von_neumann_entropy(const SymplecticSpectrum& spectrum);
double von_neumann_entropy(const CovarianceMatrix& state);

}  // namespace twcv

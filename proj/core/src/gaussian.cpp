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

#include "twcv/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace twcv {
namespace {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

std::vector<Eigen::Index> quadrature_indices(const CovarianceMatrix& state,
                                             std::span<const std::string> modes) {
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (const auto& m : modes) {
    const auto i = static_cast<Eigen::Index>(state.index_of(m));
    idx.push_back(2 * i);
    idx.push_back(2 * i + 1);
  }
  return idx;
}

void require_distinct(std::span<const std::string> modes, const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& m : modes) {
    if (!seen.insert(m).second) {
      throw ModeError(std::string(what) + ": duplicate mode label '" + m + "'");
    }
  }
}

Matrix two_by_two(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix two_mode_block(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  Matrix m(4, 4);
  m << a, b, c, d;
  return m;
}

const Matrix& sigma_z() {
  static const Matrix z = two_by_two(1.0, 0.0, 0.0, -1.0);
  return z;
}

const Matrix& id2() {
  static const Matrix i = Matrix::Identity(2, 2);
  return i;
}

std::vector<double> spectrum_from_moduli(std::vector<double> moduli, const Matrix& gamma) {
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  std::vector<double> values;
  values.reserve(moduli.size() / 2);
  for (std::size_t i = 0; i + 1 < moduli.size(); i += 2) {
    const double a = moduli[i];
    const double b = moduli[i + 1];
    if (std::abs(a - b) > kSpectrumPairTolerance * std::max(1.0, a)) {
      std::ostringstream os;
      os << "symplectic spectrum: eigenvalue moduli " << a << " and " << b
         << " of i*Omega*gamma do not pair";
      throw NumericalError(os.str(), gamma);
    }
    values.push_back(0.5 * (a + b));
  }
  return values;
}

}  // namespace

Matrix symplectic_form(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

// ---------------------------------------------------------------------------
// CovarianceMatrix

CovarianceMatrix::CovarianceMatrix(std::vector<std::string> modes, Matrix data)
    : modes_(std::move(modes)), data_(std::move(data)) {
  if (modes_.empty()) throw ModeError("covariance matrix needs at least one mode");
  require_distinct(modes_, "covariance matrix");
  const auto dim = static_cast<Eigen::Index>(2 * modes_.size());
  if (data_.rows() != dim || data_.cols() != dim) {
    std::ostringstream os;
    os << "covariance matrix of " << modes_.size() << " modes must be " << dim << "x" << dim
       << ", got " << data_.rows() << "x" << data_.cols();
    throw ModeError(os.str());
  }
  if (!data_.allFinite()) throw DomainError("covariance matrix has non-finite entries");
  const double scale = std::max(1.0, data_.cwiseAbs().maxCoeff());
  const double asym = (data_ - data_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    std::ostringstream os;
    os << "covariance matrix is not symmetric (max asymmetry " << asym << ")";
    throw DomainError(os.str());
  }
  data_ = symmetrize(data_);
}

bool CovarianceMatrix::has_mode(std::string_view label) const noexcept {
  return std::find(modes_.begin(), modes_.end(), label) != modes_.end();
}

std::size_t CovarianceMatrix::index_of(std::string_view label) const {
  const auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) throw ModeError("unknown mode label '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - modes_.begin());
}

double CovarianceMatrix::covariance(std::string_view mode_a, Quadrature qa,
                                    std::string_view mode_b, Quadrature qb) const {
  const auto i = static_cast<Eigen::Index>(2 * index_of(mode_a) + (qa == Quadrature::p ? 1 : 0));
  const auto j = static_cast<Eigen::Index>(2 * index_of(mode_b) + (qb == Quadrature::p ? 1 : 0));
  return data_(i, j);
}

CovarianceMatrix CovarianceMatrix::restrict_to(std::span<const std::string> modes) const {
  require_distinct(modes, "restrict_to");
  const auto idx = quadrature_indices(*this, modes);
  Matrix sub = data_(idx, idx);
  return CovarianceMatrix(std::vector<std::string>(modes.begin(), modes.end()), std::move(sub));
}

CovarianceMatrix CovarianceMatrix::relabel(std::string_view from, std::string to) const {
  auto modes = modes_;
  modes[index_of(from)] = std::move(to);
  return CovarianceMatrix(std::move(modes), data_);
}

bool CovarianceMatrix::is_physical() const {
  return symplectic_spectrum(*this).min() >= 1.0 - kPhysicalTolerance;
}

// ---------------------------------------------------------------------------
// SymplecticTransform

SymplecticTransform::SymplecticTransform(Matrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols() || data_.rows() == 0 || data_.rows() % 2 != 0) {
    throw DomainError("symplectic transform must be a non-empty square matrix of even size");
  }
  if (!data_.allFinite()) throw DomainError("symplectic transform has non-finite entries");
  const double defect = symplectic_defect();
  if (defect > kSymplecticTolerance * std::max(1.0, data_.squaredNorm())) {
    std::ostringstream os;
    os << "matrix is not symplectic (max |S Omega S^T - Omega| = " << defect << ")";
    throw DomainError(os.str());
  }
}

double SymplecticTransform::symplectic_defect() const {
  const Matrix omega = symplectic_form(mode_count());
  return (data_ * omega * data_.transpose() - omega).cwiseAbs().maxCoeff();
}

double SymplecticSpectrum::min() const {
  if (values.empty()) throw DomainError("empty symplectic spectrum");
  return *std::min_element(values.begin(), values.end());
}

// ---------------------------------------------------------------------------
// States

CovarianceMatrix vacuum_state(std::vector<std::string> modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes.size());
  return CovarianceMatrix(std::move(modes), Matrix::Identity(dim, dim));
}

CovarianceMatrix epr_state(double variance, std::string mode_a, std::string mode_b) {
  if (!(variance >= 1.0) || !std::isfinite(variance)) {
    throw DomainError("EPR variance must be a finite value >= 1, got " + std::to_string(variance));
  }
  const double c = std::sqrt(variance * variance - 1.0);
  Matrix m = two_mode_block(variance * id2(), c * sigma_z(), c * sigma_z(), variance * id2());
  return CovarianceMatrix({std::move(mode_a), std::move(mode_b)}, std::move(m));
}

CovarianceMatrix thermal_state(double variance, std::string mode) {
  if (!(variance >= 1.0) || !std::isfinite(variance)) {
    throw DomainError("thermal variance must be a finite value >= 1, got " +
                      std::to_string(variance));
  }
  return CovarianceMatrix({std::move(mode)}, variance * id2());
}

CovarianceMatrix tensor(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  std::vector<std::string> modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  const auto na = a.data().rows();
  const auto nb = b.data().rows();
  Matrix m = Matrix::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.data();
  m.bottomRightCorner(nb, nb) = b.data();
  return CovarianceMatrix(std::move(modes), std::move(m));
}

// ---------------------------------------------------------------------------
// Transforms

SymplecticTransform identity_transform(std::size_t n_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return SymplecticTransform(Matrix::Identity(dim, dim));
}

SymplecticTransform beam_splitter(double transmittance) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw DomainError("beam splitter transmittance must lie in [0, 1], got " +
                      std::to_string(transmittance));
  }
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  return SymplecticTransform(two_mode_block(t * id2(), r * id2(), -r * id2(), t * id2()));
}

SymplecticTransform psa(double gain) {
  if (!(gain >= 1.0) || !std::isfinite(gain)) {
    throw DomainError("PSA gain must be a finite value >= 1, got " + std::to_string(gain));
  }
  const double s = std::sqrt(gain);
  return SymplecticTransform(two_by_two(s, 0.0, 0.0, 1.0 / s));
}

SymplecticTransform pia(double gain) {
  if (!(gain >= 1.0) || !std::isfinite(gain)) {
    throw DomainError("PIA gain must be a finite value >= 1, got " + std::to_string(gain));
  }
  const double s = std::sqrt(gain);
  const double c = std::sqrt(gain - 1.0);
  return SymplecticTransform(two_mode_block(s * id2(), c * sigma_z(), c * sigma_z(), s * id2()));
}

SymplecticTransform cnot_x(double k) {
  if (!std::isfinite(k)) throw DomainError("CNOT gain must be finite");
  Matrix m(4, 4);
  m << 1, 0, -k, 0,
       0, 1, 0, 0,
       0, 0, 1, 0,
       0, k, 0, 1;
  return SymplecticTransform(std::move(m));
}

SymplecticTransform cnot_p(double k) {
  if (!std::isfinite(k)) throw DomainError("CNOT gain must be finite");
  Matrix m(4, 4);
  m << 1, 0, 0, 0,
       0, 1, 0, k,
       -k, 0, 1, 0,
       0, 0, 0, 1;
  return SymplecticTransform(std::move(m));
}

// ---------------------------------------------------------------------------
// Operations

CovarianceMatrix apply(const SymplecticTransform& transform, const CovarianceMatrix& state,
                       std::span<const std::string> targets,
                       std::span<const std::string> outputs) {
  require_distinct(targets, "apply");
  if (transform.mode_count() != targets.size()) {
    std::ostringstream os;
    os << "transform acts on " << transform.mode_count() << " modes but " << targets.size()
       << " targets were given";
    throw ModeError(os.str());
  }
  if (!outputs.empty() && outputs.size() != targets.size()) {
    throw ModeError("apply: output labels must match the number of targets");
  }
  const auto idx = quadrature_indices(state, targets);

  // Scattering S into the identity at idx equals P^T (S (+) I) P for the
  // permutation P that brings the targets to the front.
  const auto dim = state.data().rows();
  Matrix embedded = Matrix::Identity(dim, dim);
  embedded(idx, idx) = transform.data();
  Matrix out = symmetrize(embedded * state.data() * embedded.transpose());

  auto modes = state.modes();
  for (std::size_t i = 0; i < outputs.size(); ++i) modes[state.index_of(targets[i])] = outputs[i];
  return CovarianceMatrix(std::move(modes), std::move(out));
}

CovarianceMatrix apply(const SymplecticTransform& transform, const CovarianceMatrix& state,
                       std::initializer_list<std::string> targets,
                       std::initializer_list<std::string> outputs) {
  return apply(transform, state, std::span<const std::string>(targets.begin(), targets.size()),
               std::span<const std::string>(outputs.begin(), outputs.size()));
}

CovarianceMatrix homodyne_condition(const CovarianceMatrix& state, std::string_view mode,
                                    Quadrature quadrature) {
  const auto m = static_cast<Eigen::Index>(state.index_of(mode));
  if (state.mode_count() < 2) {
    throw ModeError("cannot condition a single-mode state on its only mode");
  }
  const Eigen::Index measured = 2 * m + (quadrature == Quadrature::p ? 1 : 0);
  const double variance = state.data()(measured, measured);
  if (!(variance > 0.0)) {
    std::ostringstream os;
    os << "degenerate homodyne measurement on '" << mode << "': variance " << variance;
    throw DegenerateMeasurementError(os.str());
  }

  std::vector<Eigen::Index> rest;
  std::vector<std::string> modes;
  for (std::size_t i = 0; i < state.mode_count(); ++i) {
    if (static_cast<Eigen::Index>(i) == m) continue;
    rest.push_back(static_cast<Eigen::Index>(2 * i));
    rest.push_back(static_cast<Eigen::Index>(2 * i + 1));
    modes.push_back(state.modes()[i]);
  }
  // Pseudo-inverse of X gamma_B X keeps only 1/variance on the measured entry,
  // so the correction is a rank-one update along the measured column.
  const Eigen::VectorXd sigma = state.data()(rest, measured);
  Matrix out = state.data()(rest, rest) - sigma * sigma.transpose() / variance;
  return CovarianceMatrix(std::move(modes), symmetrize(out));
}

SymplecticSpectrum symplectic_spectrum(const Matrix& gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0 || gamma.rows() == 0) {
    throw ModeError("symplectic spectrum needs a square matrix of even size");
  }
  const auto n = static_cast<std::size_t>(gamma.rows() / 2);
  const Matrix omega = symplectic_form(n);
  std::vector<double> moduli;
  moduli.reserve(2 * n);

  // For positive-definite gamma = L L^T, Omega gamma is similar to the real
  // antisymmetric L^T Omega L, so i L^T Omega L is Hermitian with eigenvalues
  // +-lambda. Otherwise fall back to the general eigen-solver.
  const Eigen::LLT<Matrix> llt(gamma);
  if (llt.info() == Eigen::Success) {
    const Matrix l = llt.matrixL();
    const Eigen::MatrixXcd h =
        std::complex<double>(0.0, 1.0) * (l.transpose() * omega * l).cast<std::complex<double>>();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("symplectic spectrum: Hermitian eigen-solver failed", gamma);
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      moduli.push_back(std::abs(solver.eigenvalues()(i)));
    }
  } else {
    const Eigen::EigenSolver<Matrix> solver(omega * gamma, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("symplectic spectrum: eigen-solver failed", gamma);
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      moduli.push_back(std::abs(solver.eigenvalues()(i)));
    }
  }
  return SymplecticSpectrum{spectrum_from_moduli(std::move(moduli), gamma)};
}

SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& state) {
  return symplectic_spectrum(state.data());
}

double entropy_function(double x) {
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double von_neumann_entropy(const SymplecticSpectrum& spectrum) {
  double s = 0.0;
  for (double lambda : spectrum.values) {
    if (lambda < 1.0 - kPhysicalTolerance) {
      std::ostringstream os;
      os << "unphysical state: symplectic eigenvalue " << lambda << " < 1";
      throw UnphysicalStateError(os.str());
    }
    s += entropy_function((std::max(lambda, 1.0) - 1.0) / 2.0);
  }
  return s;
}

double von_neumann_entropy(const CovarianceMatrix& state) {
  return von_neumann_entropy(symplectic_spectrum(state));
}

}  // namespace twcv

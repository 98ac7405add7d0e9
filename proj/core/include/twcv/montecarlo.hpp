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

// Sampling oracle for the analytic engine.
//
// Every source mode is drawn as zero-mean Gaussian phase-space variables and
// pushed through the same linear optics as the protocol, written out as
// scalar beam-splitter/amplifier relations rather than matrices.
//
// Random numbers: std::mt19937_64 (its output sequence is fixed by the C++
// standard) converted to uniforms on (0, 1] with 53-bit resolution and to
// normals with the Box-Muller transform, both implemented here so that the
// stream is identical on every platform. Sub-batch p of a partitioned run is
// seeded with splitmix64(seed + p).

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twcv/protocol.hpp"

namespace twcv {

/// splitmix64 finaliser applied to seed + index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Standard normal deviates from a seeded mt19937_64.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Per-sample quadrature records, stored column by column.
///
/// Columns always present: x_A1 p_A1 x_A3 p_A3 x_B1 p_B1 x_B3 p_B3 (modes
/// before Bob's receiver), x_Ax p_Ap (Alice's heterodyne outcomes), x_B1x p_B1p
/// (Bob's heterodyne outcomes on B1) and x_Bx. Homodyne batches add x_B5;
/// heterodyne batches add x_B5x p_B5p p_Bp.
class SampleBatch {
 public:
  SampleBatch(std::uint64_t seed, DetectionKind kind, std::vector<std::string> columns);

  std::uint64_t seed() const noexcept { return seed_; }
  DetectionKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return data_.empty() ? 0 : data_.front().size(); }
  const std::vector<std::string>& columns() const noexcept { return columns_; }

  bool has_column(std::string_view name) const noexcept;
  std::span<const double> column(std::string_view name) const;

  void reserve(std::size_t n);
  void append(std::span<const double> record);
  /// Appends `other` after this batch's records. Columns must match.
  void merge(const SampleBatch& other);

 private:
  std::size_t column_index(std::string_view name) const;

  std::uint64_t seed_;
  DetectionKind kind_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
};

/// Draws `n` protocol runs. With `partitions` > 1 the run is split into
/// independent sub-batches (evaluated concurrently) and merged in order; the
/// result is fixed by (seed, n, partitions).
SampleBatch sample_protocol(const ProtocolParams& params, std::uint64_t seed, std::size_t n,
                            unsigned partitions = 1);

struct Estimate {
  double value;
  double standard_error;
};

double sample_mean(std::span<const double> a);

/// Sample covariance with a distribution-free standard error from the fourth
/// central moment.
Estimate estimate_covariance(std::span<const double> a, std::span<const double> b);
Estimate estimate_covariance(const SampleBatch& batch, std::string_view a, std::string_view b);

/// Gaussian plug-in I(a:b) = -1/2 log2(1 - rho^2) between x_Ax and x_Bx, plus
/// the p_Ap / p_Bp term for heterodyne batches. The standard error follows
/// from the delta method on the sample correlation.
Estimate estimate_mutual_information(const SampleBatch& batch);

/// Grid scan over k of the sample variance of x_B5 - k x_B1x (x_B5x for
/// heterodyne batches). Returns the minimising grid point.
double estimate_optimal_k(const SampleBatch& batch, std::size_t grid_points = 100001);

/// One comparison of a sampled quantity against its analytic counterpart.
/// `tolerance` is absolute: a multiple of the standard error, or a relative
/// bound already scaled by the analytic value.
struct OracleCheck {
  std::string name;
  double analytic;
  double sampled;
  double tolerance;
  bool pass;
};

inline constexpr double kOracleStandardErrors = 5.0;
inline constexpr double kOracleRelativeTolerance = 0.01;

/// Samples `n` records and compares: every covariance entry of
/// (A1, A3, B1, B3), every sampled mean, I(a:b), the optimal k, and the
/// variance of Bob's estimator(s).
std::vector<OracleCheck> run_oracle_checks(const ProtocolParams& params, std::uint64_t seed,
                                           std::size_t n, unsigned partitions = 1);

}  // namespace twcv

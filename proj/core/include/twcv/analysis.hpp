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

// Parameter sweeps and root finding on the secret key rate.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twcv/keyrate.hpp"
#include "twcv/protocol.hpp"

namespace twcv {

enum class SweepVariable { distance, gain, inherent_noise };

struct Range {
  double start;
  double stop;
  double step;

  void validate() const;
  /// start, start + step, ...; ceil((stop - start)/step) + 1 points, the last
  /// one clamped to stop.
  std::vector<double> values() const;
};

/// One curve of a comparison: an amplifier and optional detector overrides.
struct Configuration {
  std::string label;
  AmplifierSpec amplifier;
  std::optional<double> efficiency;
  std::optional<double> electronic_noise;

  ProtocolParams applied_to(ProtocolParams base) const;
};

/// Curves compared in the published distance plots for a detector kind:
/// no amplifier, gains 2 and 15 (with N = 1 and 1.5 for the PIA), and a
/// perfect detector without amplifier.
std::vector<Configuration> default_configurations(DetectionKind kind);

struct SweepSpec {
  ProtocolParams base;
  SweepVariable variable = SweepVariable::distance;
  Range range{1.0, 80.0, 1.0};
  std::vector<Configuration> configurations;

  void validate() const;
};

struct SweepCell {
  double key_rate;
  double mutual_information;
  double holevo;
};

struct SweepRow {
  double value;
  std::vector<SweepCell> cells;  // one per configuration, in order
};

/// Overwrites the swept variable in `params`.
ProtocolParams with_swept_value(ProtocolParams params, SweepVariable variable, double value);

std::vector<SweepRow> sweep(const SweepSpec& grid);
/// sweep() restricted to distance scans.
std::vector<SweepRow> sweep_distance(const SweepSpec& grid);

struct RootOptions {
  double tolerance;
  int max_iterations = 60;
};

inline constexpr RootOptions kDistanceRootOptions{1e-6, 60};
inline constexpr RootOptions kNoiseRootOptions{1e-10, 60};

/// Distance where K crosses zero. Starts at 1 km, doubles the upper end until
/// K < 0, then bisects. Throws BracketError if K(1 km) <= 0 or no sign change
/// is found below 4096 km.
double find_max_distance(const ProtocolParams& params,
                         RootOptions options = kDistanceRootOptions);

enum class ToleranceCriterion {
  match_unamplified,  // K_pia(N) = K without amplifier
  positive_key,       // K_pia(N) = 0
};

struct TolerableNoise {
  std::optional<double> noise;  // empty: even N = 1 fails the criterion
  ToleranceCriterion criterion;
  double target_key_rate;
  double residual;  // K_pia(noise) - target, 0 when noise is empty
};

/// Largest PIA inherent noise that does not lower the key rate below the
/// unamplified protocol (within its range) or below zero (beyond it).
/// `params` must describe heterodyne detection with a PIA.
TolerableNoise find_tolerable_noise(const ProtocolParams& params, double distance_km,
                                    RootOptions options = kNoiseRootOptions);
/// Same, reusing a precomputed maximum distance of the unamplified protocol.
TolerableNoise find_tolerable_noise(const ProtocolParams& params, double distance_km,
                                    double unamplified_max_distance,
                                    RootOptions options = kNoiseRootOptions);

struct SurfaceCell {
  double gain;
  double distance_km;
  std::optional<double> noise;
  std::string error;  // non-empty when the cell failed
};

struct NoiseSurface {
  std::vector<double> gains;
  std::vector<double> distances;
  std::vector<SurfaceCell> cells;  // ordered by (gain, distance)

  const SurfaceCell& at(std::size_t gain_index, std::size_t distance_index) const {
    return cells[gain_index * distances.size() + distance_index];
  }
};

/// Evaluates find_tolerable_noise on every (gain, distance) pair. Cells are
/// independent and may run on `threads` workers (0: hardware concurrency);
/// the output order does not depend on the thread count.
NoiseSurface tolerable_noise_surface(const ProtocolParams& params, std::span<const double> gains,
                                     std::span<const double> distances, unsigned threads = 0);

}  // namespace twcv

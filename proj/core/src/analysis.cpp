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

#include "twcv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

namespace twcv {
namespace {

constexpr double kStartDistanceKm = 1.0;
constexpr double kMaxBracketDistanceKm = 4096.0;
constexpr double kMaxBracketNoise = 1e4;

double key_rate(const ProtocolParams& params) { return secret_key_rate(params).key_rate; }

// Bisection on a bracket with f(lo) > 0 >= f(hi). Returns the midpoint of the
// final interval.
double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo,
              double f_hi, RootOptions options, const char* what) {
  if (!(f_lo > 0.0 && f_hi <= 0.0)) {
    throw BracketError(std::string(what) + ": no sign change on bracket", lo, hi, f_lo, f_hi);
  }
  for (int i = 0; i < options.max_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= options.tolerance) return mid;
    const double f_mid = f(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  if (hi - lo <= options.tolerance) return 0.5 * (lo + hi);
  std::ostringstream os;
  os << what << ": bisection did not reach tolerance " << options.tolerance << " in "
     << options.max_iterations << " iterations";
  throw BracketError(os.str(), lo, hi, f_lo, f_hi);
}

ProtocolParams unamplified(ProtocolParams params) {
  params.amplifier = AmplifierSpec{};
  return params;
}

void require_pia(const ProtocolParams& params) {
  if (params.detector.kind != DetectionKind::heterodyne ||
      params.amplifier.kind != AmplifierKind::pia) {
    throw DomainError("tolerable noise is defined for heterodyne detection with a PIA");
  }
}

}  // namespace

void Range::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("range step must be > 0");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw DomainError("range bounds must be finite");
  if (start > stop) throw DomainError("range start must not exceed stop");
}

std::vector<double> Range::values() const {
  validate();
  const auto n = static_cast<std::size_t>(std::ceil((stop - start) / step - 1e-9)) + 1;
  std::vector<double> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(std::min(start + static_cast<double>(i) * step, stop));
  }
  return v;
}

ProtocolParams Configuration::applied_to(ProtocolParams base) const {
  base.amplifier = amplifier;
  if (efficiency) base.detector.efficiency = *efficiency;
  if (electronic_noise) base.detector.electronic_noise = *electronic_noise;
  return base;
}

std::vector<Configuration> default_configurations(DetectionKind kind) {
  const Configuration none{"none", {}, std::nullopt, std::nullopt};
  const Configuration perfect{"perfect", {}, 1.0, 0.0};
  if (kind == DetectionKind::homodyne) {
    return {
        none,
        {"psa_g2", {AmplifierKind::psa, 2.0, 1.0}, std::nullopt, std::nullopt},
        {"psa_g15", {AmplifierKind::psa, 15.0, 1.0}, std::nullopt, std::nullopt},
        perfect,
    };
  }
  return {
      none,
      {"pia_g2_N1", {AmplifierKind::pia, 2.0, 1.0}, std::nullopt, std::nullopt},
      {"pia_g2_N1.5", {AmplifierKind::pia, 2.0, 1.5}, std::nullopt, std::nullopt},
      {"pia_g15_N1", {AmplifierKind::pia, 15.0, 1.0}, std::nullopt, std::nullopt},
      {"pia_g15_N1.5", {AmplifierKind::pia, 15.0, 1.5}, std::nullopt, std::nullopt},
      perfect,
  };
}

void SweepSpec::validate() const {
  range.validate();
  if (configurations.empty()) throw DomainError("sweep needs at least one configuration");
}

ProtocolParams with_swept_value(ProtocolParams params, SweepVariable variable, double value) {
  switch (variable) {
    case SweepVariable::distance:
      params.channel.distance_km = value;
      break;
    case SweepVariable::gain:
      if (params.amplifier.kind != AmplifierKind::none) params.amplifier.gain = value;
      break;
    case SweepVariable::inherent_noise:
      if (params.amplifier.kind == AmplifierKind::pia) params.amplifier.inherent_noise = value;
      break;
  }
  return params;
}

std::vector<SweepRow> sweep(const SweepSpec& grid) {
  grid.validate();
  std::vector<SweepRow> rows;
  for (double value : grid.range.values()) {
    SweepRow row{value, {}};
    row.cells.reserve(grid.configurations.size());
    for (const auto& config : grid.configurations) {
      const auto r =
          secret_key_rate(with_swept_value(config.applied_to(grid.base), grid.variable, value));
      row.cells.push_back({r.key_rate, r.mutual_information, r.holevo});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> sweep_distance(const SweepSpec& grid) {
  if (grid.variable != SweepVariable::distance) {
    throw DomainError("sweep_distance requires a distance sweep");
  }
  return sweep(grid);
}

double find_max_distance(const ProtocolParams& params, RootOptions options) {
  const auto at = [&params](double d) {
    auto p = params;
    p.channel.distance_km = d;
    return key_rate(p);
  };
  double lo = kStartDistanceKm;
  const double f_lo = at(lo);
  if (!(f_lo > 0.0)) {
    throw BracketError("max distance: key rate is not positive at the starting distance", lo, lo,
                       f_lo, f_lo);
  }
  double hi = 2.0 * lo;
  double f_hi = at(hi);
  double f_lo_cur = f_lo;
  while (f_hi > 0.0) {
    if (hi >= kMaxBracketDistanceKm) {
      throw BracketError("max distance: key rate stays positive", lo, hi, f_lo_cur, f_hi);
    }
    lo = hi;
    f_lo_cur = f_hi;
    hi *= 2.0;
    f_hi = at(hi);
  }
  return bisect(at, lo, hi, f_lo_cur, f_hi, options, "max distance");
}

TolerableNoise find_tolerable_noise(const ProtocolParams& params, double distance_km,
                                    RootOptions options) {
  require_pia(params);
  return find_tolerable_noise(params, distance_km, find_max_distance(unamplified(params)),
                              options);
}

TolerableNoise find_tolerable_noise(const ProtocolParams& params, double distance_km,
                                    double unamplified_max_distance, RootOptions options) {
  require_pia(params);
  auto base = params;
  base.channel.distance_km = distance_km;

  TolerableNoise result{};
  if (distance_km <= unamplified_max_distance) {
    result.criterion = ToleranceCriterion::match_unamplified;
    result.target_key_rate = key_rate(unamplified(base));
  } else {
    result.criterion = ToleranceCriterion::positive_key;
    result.target_key_rate = 0.0;
  }

  const auto excess = [&base, target = result.target_key_rate](double noise) {
    auto p = base;
    p.amplifier.inherent_noise = noise;
    return key_rate(p) - target;
  };

  double lo = 1.0;
  const double f_lo = excess(lo);
  if (f_lo < 0.0) {
    result.noise.reset();
    result.residual = 0.0;
    return result;
  }
  if (f_lo == 0.0) {
    result.noise = lo;
    result.residual = 0.0;
    return result;
  }
  double hi = 2.0;
  double f_hi = excess(hi);
  double f_lo_cur = f_lo;
  while (f_hi > 0.0) {
    if (hi >= kMaxBracketNoise) {
      throw BracketError("tolerable noise: key rate criterion holds for every noise tried", lo, hi,
                         f_lo_cur, f_hi);
    }
    lo = hi;
    f_lo_cur = f_hi;
    hi *= 2.0;
    f_hi = excess(hi);
  }
  const double noise = bisect(excess, lo, hi, f_lo_cur, f_hi, options, "tolerable noise");
  result.noise = noise;
  result.residual = excess(noise);
  return result;
}

NoiseSurface tolerable_noise_surface(const ProtocolParams& params, std::span<const double> gains,
                                     std::span<const double> distances, unsigned threads) {
  require_pia(params);
  NoiseSurface surface{{gains.begin(), gains.end()}, {distances.begin(), distances.end()}, {}};
  surface.cells.reserve(gains.size() * distances.size());
  for (double g : gains) {
    for (double d : distances) surface.cells.push_back({g, d, std::nullopt, {}});
  }
  if (surface.cells.empty()) return surface;

  const double unamplified_max = find_max_distance(unamplified(params));

  const auto evaluate = [&](SurfaceCell& cell) {
    try {
      auto p = params;
      p.amplifier.gain = cell.gain;
      cell.noise = find_tolerable_noise(p, cell.distance_km, unamplified_max).noise;
    } catch (const std::exception& e) {
      cell.noise.reset();
      cell.error = e.what();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(surface.cells.size()));
  if (threads <= 1) {
    for (auto& cell : surface.cells) evaluate(cell);
    return surface;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < surface.cells.size(); i += threads) evaluate(surface.cells[i]);
    });
  }
  workers.clear();
  return surface;
}

}  // namespace twcv

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

#include "twcv/montecarlo.hpp"

#include "twcv/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace twcv {
namespace {

struct Mode {
  double x;
  double p;
};

struct ModePair {
  Mode a;
  Mode b;
};

ModePair beam_split(double transmittance, Mode a, Mode b) {
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  return {{t * a.x + r * b.x, t * a.p + r * b.p}, {-r * a.x + t * b.x, -r * a.p + t * b.p}};
}

Mode vacuum(NormalSource& rng) {
  const double x = rng.next();
  return {x, rng.next()};
}

// x quadratures correlated, p quadratures anticorrelated; each pair is drawn
// through the lower-triangular factor of [[V, c], [+-c, V]].
ModePair two_mode_squeezed(double variance, NormalSource& rng) {
  const double c = std::sqrt(variance * variance - 1.0);
  const double l11 = std::sqrt(variance);
  const double l21 = c / l11;
  const double l22 = std::sqrt(variance - l21 * l21);
  const double u1 = rng.next();
  const double u2 = rng.next();
  const double v1 = rng.next();
  const double v2 = rng.next();
  return {{l11 * u1, l11 * v1}, {l21 * u1 + l22 * u2, -l21 * v1 + l22 * v2}};
}

std::vector<std::string> columns_for(DetectionKind kind) {
  std::vector<std::string> c{"x_A1", "p_A1", "x_A3", "p_A3", "x_B1", "p_B1", "x_B3",
                             "p_B3", "x_Ax", "p_Ap", "x_B1x", "p_B1p", "x_Bx"};
  if (kind == DetectionKind::homodyne) {
    c.push_back("x_B5");
  } else {
    c.insert(c.end(), {"x_B5x", "p_B5p", "p_Bp"});
  }
  return c;
}

struct Chain {
  double te, ve, t, ta, va, vb;
  double eta, ancilla, gain, noise, k;
  DetectionKind kind;
};

Chain make_chain(const ProtocolParams& params) {
  params.validate();
  const double t = params.channel.transmittance();
  const auto eve = eve_parameters(t, params.alice_transmittance, params.channel.excess_noise);
  return {eve.splitter_transmittance,
          eve.variance,
          t,
          params.alice_transmittance,
          params.alice_variance,
          params.bob_variance,
          params.detector.efficiency,
          params.detector.ancilla_variance(),
          params.amplifier.effective_gain(),
          params.amplifier.kind == AmplifierKind::pia ? params.amplifier.inherent_noise : 1.0,
          optimal_k(params).k,
          params.detector.kind};
}

void draw(const Chain& c, NormalSource& rng, std::vector<double>& rec) {
  rec.clear();
  const auto [b1, b2] = two_mode_squeezed(c.vb, rng);
  const auto [a1, a2] = two_mode_squeezed(c.va, rng);
  const auto [e1, e2] = two_mode_squeezed(c.ve, rng);
  (void)e1;
  const Mode e0 = vacuum(rng);

  const auto [e3, e5] = beam_split(c.te, e2, e0);
  const auto [a_in, e4] = beam_split(c.t, b2, e3);
  (void)e4;
  const auto [a_out, a3] = beam_split(c.ta, a_in, a2);
  const auto [b3, e6] = beam_split(c.t, a_out, e5);
  (void)e6;

  const auto [alice_x, alice_p] = beam_split(0.5, a1, vacuum(rng));
  const auto [b1x, b1p] = beam_split(0.5, b1, vacuum(rng));

  rec.insert(rec.end(), {a1.x, a1.p, a3.x, a3.p, b1.x, b1.p, b3.x, b3.p, alice_x.x, alice_p.p,
                         b1x.x, b1p.p});

  if (c.kind == DetectionKind::homodyne) {
    const Mode amplified{std::sqrt(c.gain) * b3.x, b3.p / std::sqrt(c.gain)};
    const auto [f0, g] = two_mode_squeezed(c.ancilla, rng);
    (void)g;
    const auto [b5, f] = beam_split(c.eta, amplified, f0);
    (void)f;
    rec.push_back(b5.x - c.k * b1x.x);
    rec.push_back(b5.x);
    return;
  }

  const auto [i0, j] = two_mode_squeezed(c.noise, rng);
  (void)j;
  const double sg = std::sqrt(c.gain);
  const double sg1 = std::sqrt(c.gain - 1.0);
  const Mode b4{sg * b3.x + sg1 * i0.x, sg * b3.p - sg1 * i0.p};
  const auto [f0, g] = two_mode_squeezed(c.ancilla, rng);
  (void)g;
  const auto [b5, f] = beam_split(c.eta, b4, f0);
  (void)f;
  const auto [b5x, b5p] = beam_split(0.5, b5, vacuum(rng));
  rec.push_back(b5x.x - c.k * b1x.x);
  rec.insert(rec.end(), {b5x.x, b5p.p, b5p.p + c.k * b1p.p});
}

SampleBatch draw_batch(const Chain& chain, std::uint64_t seed, std::uint64_t stream_seed,
                       std::size_t n) {
  SampleBatch batch(seed, chain.kind, columns_for(chain.kind));
  batch.reserve(n);
  NormalSource rng(stream_seed);
  std::vector<double> rec;
  rec.reserve(batch.columns().size());
  for (std::size_t i = 0; i < n; ++i) {
    draw(chain, rng, rec);
    batch.append(rec);
  }
  return batch;
}

double quadrature_information(std::span<const double> a, std::span<const double> b,
                              double* standard_error) {
  const double vab = estimate_covariance(a, b).value;
  const double va = estimate_covariance(a, a).value;
  const double vb = estimate_covariance(b, b).value;
  if (!(va > 0.0) || !(vb > 0.0)) {
    throw DegenerateMeasurementError("mutual information estimate: zero sample variance");
  }
  const double rho2 = vab * vab / (va * vb);
  const auto n = static_cast<double>(a.size());
  *standard_error = std::sqrt(rho2) / (std::numbers::ln2 * std::sqrt(n));
  return -0.5 * std::log2(1.0 - rho2);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double NormalSource::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;  // (0, 1]
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;          // [0, 1)
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

SampleBatch::SampleBatch(std::uint64_t seed, DetectionKind kind, std::vector<std::string> columns)
    : seed_(seed), kind_(kind), columns_(std::move(columns)), data_(columns_.size()) {}

bool SampleBatch::has_column(std::string_view name) const noexcept {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t SampleBatch::column_index(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw ModeError("sample batch has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

std::span<const double> SampleBatch::column(std::string_view name) const {
  return data_[column_index(name)];
}

void SampleBatch::reserve(std::size_t n) {
  for (auto& c : data_) c.reserve(n);
}

void SampleBatch::append(std::span<const double> record) {
  if (record.size() != columns_.size()) throw ModeError("sample record has the wrong width");
  for (std::size_t i = 0; i < record.size(); ++i) data_[i].push_back(record[i]);
}

void SampleBatch::merge(const SampleBatch& other) {
  if (other.columns_ != columns_) throw ModeError("cannot merge sample batches with other columns");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i].insert(data_[i].end(), other.data_[i].begin(), other.data_[i].end());
  }
}

SampleBatch sample_protocol(const ProtocolParams& params, std::uint64_t seed, std::size_t n,
                            unsigned partitions) {
  if (n == 0) throw DomainError("sample count must be >= 1");
  const Chain chain = make_chain(params);
  partitions = std::max(1u, partitions);
  if (partitions == 1) return draw_batch(chain, seed, derive_seed(seed, 0), n);

  std::vector<SampleBatch> parts;
  parts.reserve(partitions);
  for (unsigned p = 0; p < partitions; ++p) {
    parts.emplace_back(seed, chain.kind, columns_for(chain.kind));
  }
  {
    std::vector<std::jthread> workers;
    for (unsigned p = 0; p < partitions; ++p) {
      const std::size_t share = n / partitions + (p < n % partitions ? 1 : 0);
      workers.emplace_back([&, p, share] {
        parts[p] = draw_batch(chain, seed, derive_seed(seed, p), share);
      });
    }
  }
  SampleBatch merged = std::move(parts.front());
  for (unsigned p = 1; p < partitions; ++p) merged.merge(parts[p]);
  return merged;
}

double sample_mean(std::span<const double> a) {
  if (a.empty()) throw DomainError("mean of an empty sample");
  double s = 0.0;
  for (double v : a) s += v;
  return s / static_cast<double>(a.size());
}

Estimate estimate_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw DomainError("covariance estimate needs two equally sized samples of size >= 2");
  }
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const auto n = static_cast<double>(a.size());
  double s2 = 0.0;
  double s4 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double prod = (a[i] - ma) * (b[i] - mb);
    s2 += prod;
    s4 += prod * prod;
  }
  const double cov = s2 / (n - 1.0);
  const double m4 = s4 / n;
  return {cov, std::sqrt(std::max(0.0, m4 - cov * cov) / n)};
}

Estimate estimate_covariance(const SampleBatch& batch, std::string_view a, std::string_view b) {
  return estimate_covariance(batch.column(a), batch.column(b));
}

Estimate estimate_mutual_information(const SampleBatch& batch) {
  double se_x = 0.0;
  double bits = quadrature_information(batch.column("x_Ax"), batch.column("x_Bx"), &se_x);
  double se2 = se_x * se_x;
  if (batch.kind() == DetectionKind::heterodyne) {
    double se_p = 0.0;
    bits += quadrature_information(batch.column("p_Ap"), batch.column("p_Bp"), &se_p);
    se2 += se_p * se_p;
  }
  return {bits, std::sqrt(se2)};
}

double estimate_optimal_k(const SampleBatch& batch, std::size_t grid_points) {
  if (grid_points < 2) throw DomainError("k scan needs at least two grid points");
  const auto signal = batch.column(batch.kind() == DetectionKind::homodyne ? "x_B5" : "x_B5x");
  const auto reference = batch.column("x_B1x");
  const double vs = estimate_covariance(signal, signal).value;
  const double vr = estimate_covariance(reference, reference).value;
  const double c = estimate_covariance(signal, reference).value;
  if (!(vr > 0.0)) throw DegenerateMeasurementError("k scan: zero variance of x_B1x");

  const double k_max = 2.0 * std::sqrt(vs / vr);
  double best_k = 0.0;
  double best_var = vs;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double k = k_max * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double var = vs - 2.0 * k * c + k * k * vr;
    if (var < best_var) {
      best_var = var;
      best_k = k;
    }
  }
  return best_k;
}

namespace {

OracleCheck within_errors(std::string name, double analytic, Estimate sampled) {
  const double tol = kOracleStandardErrors * sampled.standard_error;
  return {std::move(name), analytic, sampled.value, tol,
          std::abs(sampled.value - analytic) <= tol};
}

OracleCheck within_relative(std::string name, double analytic, double sampled) {
  const double tol = kOracleRelativeTolerance * std::abs(analytic);
  return {std::move(name), analytic, sampled, tol, std::abs(sampled - analytic) <= tol};
}

}  // namespace

std::vector<OracleCheck> run_oracle_checks(const ProtocolParams& params, std::uint64_t seed,
                                           std::size_t n, unsigned partitions) {
  params.validate();
  const SampleBatch batch = sample_protocol(params, seed, n, partitions);
  const CovarianceMatrix gamma = gamma_closed_form(params);
  const std::vector<std::string> columns{"x_A1", "p_A1", "x_A3", "p_A3",
                                         "x_B1", "p_B1", "x_B3", "p_B3"};
  std::vector<OracleCheck> checks;

  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto col = batch.column(columns[i]);
    const double m = sample_mean(col);
    const double sd = std::sqrt(estimate_covariance(col, col).value);
    checks.push_back(within_errors("mean(" + columns[i] + ")", 0.0,
                                   {m, sd / std::sqrt(static_cast<double>(col.size()))}));
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = i; j < columns.size(); ++j) {
      checks.push_back(within_errors("cov(" + columns[i] + "," + columns[j] + ")",
                                     gamma.data()(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j)),
                                     estimate_covariance(batch, columns[i], columns[j])));
    }
  }

  const CovarianceMatrix receiver = receiver_chain(params);
  checks.push_back(within_errors("I(a:b)", mutual_information(params, receiver).bits,
                                 estimate_mutual_information(batch)));
  checks.push_back(within_relative("k", optimal_k(params).k, estimate_optimal_k(batch)));
  checks.push_back(within_relative("var(x_Bx)", receiver.variance("Bx", Quadrature::x),
                                   estimate_covariance(batch, "x_Bx", "x_Bx").value));
  if (params.detector.kind == DetectionKind::heterodyne) {
    checks.push_back(within_relative("var(p_Bp)", receiver.variance("Bp", Quadrature::p),
                                     estimate_covariance(batch, "p_Bp", "p_Bp").value));
  }
  return checks;
}

}  // namespace twcv

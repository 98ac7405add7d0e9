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

#include "twcv/protocol.hpp"

#include <cmath>
#include <sstream>

namespace twcv {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Matrix block2(double v) { return v * Matrix::Identity(2, 2); }

Matrix zblock(double v) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = v;
  m(1, 1) = -v;
  return m;
}

}  // namespace

double ChannelModel::transmittance() const {
  return channel_transmittance(loss_db_per_km, distance_km);
}

double DetectorModel::ancilla_variance() const {
  if (efficiency >= 1.0) return 1.0;
  const double factor = kind == DetectionKind::homodyne ? 1.0 : 2.0;
  return 1.0 + factor * electronic_noise / (1.0 - efficiency);
}

void ProtocolParams::validate() const {
  require(alice_variance >= 1.0 && std::isfinite(alice_variance),
          "V_A must be >= 1, got " + fmt(alice_variance));
  require(bob_variance >= 1.0 && std::isfinite(bob_variance),
          "V_B must be >= 1, got " + fmt(bob_variance));
  require(alice_transmittance > 0.0 && alice_transmittance <= 1.0,
          "T_A must lie in (0, 1], got " + fmt(alice_transmittance));
  require(reconciliation_efficiency >= 0.0 && reconciliation_efficiency <= 1.0,
          "beta must lie in [0, 1], got " + fmt(reconciliation_efficiency));
  require(channel.loss_db_per_km >= 0.0 && std::isfinite(channel.loss_db_per_km),
          "loss coefficient must be >= 0 dB/km, got " + fmt(channel.loss_db_per_km));
  require(channel.distance_km >= 0.0 && std::isfinite(channel.distance_km),
          "distance must be >= 0 km, got " + fmt(channel.distance_km));
  require(channel.excess_noise >= 0.0 && std::isfinite(channel.excess_noise),
          "excess noise must be >= 0, got " + fmt(channel.excess_noise));
  if (channel.transmittance() >= 1.0 && channel.excess_noise > 0.0) {
    throw SingularityError("V_E diverges at T = 1 with excess noise " +
                           fmt(channel.excess_noise) + " (distance " +
                           fmt(channel.distance_km) + " km)");
  }
  require(detector.efficiency > 0.0 && detector.efficiency <= 1.0,
          "detector efficiency eta must lie in (0, 1], got " + fmt(detector.efficiency));
  require(detector.electronic_noise >= 0.0 && std::isfinite(detector.electronic_noise),
          "electronic noise must be >= 0, got " + fmt(detector.electronic_noise));
  require(detector.efficiency < 1.0 || detector.electronic_noise == 0.0,
          "a perfect detector (eta = 1) requires zero electronic noise");
  require(amplifier.gain >= 1.0 && std::isfinite(amplifier.gain),
          "amplifier gain must be >= 1, got " + fmt(amplifier.gain));
  require(amplifier.inherent_noise >= 1.0 && std::isfinite(amplifier.inherent_noise),
          "amplifier inherent noise must be >= 1, got " + fmt(amplifier.inherent_noise));
  if (amplifier.kind == AmplifierKind::psa) {
    require(detector.kind == DetectionKind::homodyne,
            "a phase-sensitive amplifier requires homodyne detection");
  }
  if (amplifier.kind == AmplifierKind::pia) {
    require(detector.kind == DetectionKind::heterodyne,
            "a phase-insensitive amplifier requires heterodyne detection");
  }
}

double channel_transmittance(double loss_db_per_km, double distance_km) {
  if (!(loss_db_per_km >= 0.0) || !std::isfinite(loss_db_per_km)) {
    throw DomainError("loss coefficient must be >= 0, got " + fmt(loss_db_per_km));
  }
  if (!(distance_km >= 0.0) || !std::isfinite(distance_km)) {
    throw DomainError("distance must be >= 0, got " + fmt(distance_km));
  }
  return std::pow(10.0, -loss_db_per_km * distance_km / 10.0);
}

EveParameters eve_parameters(double transmittance, double alice_transmittance,
                             double excess_noise) {
  if (transmittance >= 1.0 && excess_noise > 0.0) {
    throw SingularityError("V_E diverges at T = 1 with excess noise " + fmt(excess_noise));
  }
  const double te = 1.0 / (1.0 + transmittance * alice_transmittance);
  const double ve =
      excess_noise == 0.0 ? 1.0 : 1.0 + 2.0 * transmittance * excess_noise / (1.0 - transmittance);
  return {te, ve};
}

EstimatorParams optimal_k(const ProtocolParams& params) {
  const double t = params.channel.transmittance();
  const double vb = params.bob_variance;
  const double factor = params.detector.kind == DetectionKind::homodyne ? 2.0 : 1.0;
  const double k = std::sqrt(factor * params.detector.efficiency *
                             params.amplifier.effective_gain() * params.alice_transmittance * t *
                             t * (vb - 1.0) / (vb + 1.0));
  return {k};
}

CovarianceMatrix gamma_closed_form(const ProtocolParams& params) {
  params.validate();
  const double t = params.channel.transmittance();
  const double ta = params.alice_transmittance;
  const double va = params.alice_variance;
  const double vb = params.bob_variance;
  const double ve = eve_parameters(t, ta, params.channel.excess_noise).variance;
  const double ttA = 1.0 + t * ta;

  const double a1a3 = std::sqrt(ta * (va * va - 1.0));
  const double a1b3 = std::sqrt(t * (1.0 - ta) * (va * va - 1.0));
  const double a3 = ta * va + t * (1.0 - ta) * vb + (1.0 - ta) * (1.0 - t) * ve / ttA +
                    t * (1.0 - t) * ta * (1.0 - ta) / ttA;
  const double a3b1 = -std::sqrt(t * (1.0 - ta) * (vb * vb - 1.0));
  const double a3b3 = std::sqrt(t * ta * (1.0 - ta)) * (va - t * vb - 1.0 + t);
  const double b3 = ta * t * t * vb + (1.0 - ta) * t * va + (1.0 - t) * ttA;
  const double b1b3 = t * std::sqrt(ta * (vb * vb - 1.0));

  Matrix m(8, 8);
  // clang-format off
  m << block2(va),    zblock(a1a3), block2(0.0),  zblock(a1b3),
       zblock(a1a3),  block2(a3),   zblock(a3b1), block2(a3b3),
       block2(0.0),   zblock(a3b1), block2(vb),   zblock(b1b3),
       zblock(a1b3),  block2(a3b3), zblock(b1b3), block2(b3);
  // clang-format on
  return CovarianceMatrix({"A1", "A3", "B1", "B3"}, std::move(m));
}

CovarianceMatrix global_channel_state(const ProtocolParams& params) {
  params.validate();
  const double t = params.channel.transmittance();
  const double ta = params.alice_transmittance;
  const auto eve = eve_parameters(t, ta, params.channel.excess_noise);

  auto state = tensor(tensor(epr_state(params.bob_variance, "B1", "B2"),
                             epr_state(params.alice_variance, "A1", "A2")),
                      tensor(epr_state(eve.variance, "E1", "E2"), vacuum_state({"E0"})));
  state = apply(beam_splitter(eve.splitter_transmittance), state, {"E2", "E0"}, {"E3", "E5"});
  state = apply(beam_splitter(t), state, {"B2", "E3"}, {"Ain", "E4"});
  state = apply(beam_splitter(ta), state, {"Ain", "A2"}, {"Aout", "A3"});
  state = apply(beam_splitter(t), state, {"Aout", "E5"}, {"B3", "E6"});
  return state.restrict_to({"A1", "A3", "B1", "B3", "E1", "E4", "E6"});
}

CovarianceMatrix gamma_by_propagation(const ProtocolParams& params) {
  return global_channel_state(params).restrict_to({"A1", "A3", "B1", "B3"});
}

CovarianceMatrix receiver_chain_homodyne(const ProtocolParams& params) {
  return receiver_chain_homodyne(params, gamma_closed_form(params));
}

CovarianceMatrix receiver_chain_homodyne(const ProtocolParams& params,
                                         const CovarianceMatrix& alice_bob) {
  params.validate();
  if (params.detector.kind != DetectionKind::homodyne) {
    throw DomainError("homodyne receiver chain requires a homodyne detector");
  }
  if (params.amplifier.kind == AmplifierKind::pia) {
    throw DomainError("homodyne receiver chain supports amplifier kinds none and psa");
  }
  const double k = optimal_k(params).k;

  auto state = tensor(alice_bob, vacuum_state({"vB1"}));
  state = apply(beam_splitter(0.5), state, {"B1", "vB1"}, {"B1x", "B1p"});
  state = tensor(state.restrict_to({"A1", "A3", "B1p", "B1x", "B3"}),
                 epr_state(params.detector.ancilla_variance(), "F0", "G"));
  state = apply(psa(params.amplifier.effective_gain()), state, {"B3"});
  state = apply(beam_splitter(params.detector.efficiency), state, {"B3", "F0"}, {"B5", "F"});
  state = apply(cnot_x(k), state, {"B5", "B1x"}, {"Bx", "B6"});
  return state.restrict_to({"A1", "A3", "B1p", "B6", "F", "G", "Bx"});
}

CovarianceMatrix receiver_chain_heterodyne(const ProtocolParams& params) {
  return receiver_chain_heterodyne(params, gamma_closed_form(params));
}

CovarianceMatrix receiver_chain_heterodyne(const ProtocolParams& params,
                                           const CovarianceMatrix& alice_bob) {
  params.validate();
  if (params.detector.kind != DetectionKind::heterodyne) {
    throw DomainError("heterodyne receiver chain requires a heterodyne detector");
  }
  if (params.amplifier.kind == AmplifierKind::psa) {
    throw DomainError("heterodyne receiver chain supports amplifier kinds none and pia");
  }
  const double k = optimal_k(params).k;
  const double noise =
      params.amplifier.kind == AmplifierKind::pia ? params.amplifier.inherent_noise : 1.0;

  auto state = tensor(alice_bob, vacuum_state({"vB1"}));
  state = apply(beam_splitter(0.5), state, {"B1", "vB1"}, {"B1x", "B1p"});
  state = tensor(state, epr_state(noise, "I0", "J"));
  state = apply(pia(params.amplifier.effective_gain()), state, {"B3", "I0"}, {"B4", "I"});
  state = tensor(state, epr_state(params.detector.ancilla_variance(), "F0", "G"));
  state = apply(beam_splitter(params.detector.efficiency), state, {"B4", "F0"}, {"B5", "F"});
  state = tensor(state, vacuum_state({"vB5"}));
  state = apply(beam_splitter(0.5), state, {"B5", "vB5"}, {"B5x", "B5p"});
  state = apply(cnot_x(k), state, {"B5x", "B1x"}, {"Bx", "B6"});
  state = apply(cnot_p(k), state, {"B5p", "B1p"}, {"Bp", "B7"});
  return state.restrict_to({"A1", "A3", "I", "J", "F", "G", "B6", "B7", "Bx", "Bp"});
}

CovarianceMatrix receiver_chain(const ProtocolParams& params) {
  return params.detector.kind == DetectionKind::homodyne ? receiver_chain_homodyne(params)
                                                         : receiver_chain_heterodyne(params);
}

CovarianceMatrix conditional_gamma(const CovarianceMatrix& full,
                                   std::span<const Measurement> measured) {
  CovarianceMatrix state = full;
  for (const auto& m : measured) state = homodyne_condition(state, m.mode, m.quadrature);
  return state;
}

std::vector<Measurement> bob_measurements(DetectionKind kind) {
  if (kind == DetectionKind::homodyne) return {{"Bx", Quadrature::x}};
  return {{"Bx", Quadrature::x}, {"Bp", Quadrature::p}};
}

}  // namespace twcv

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

// Entanglement-based two-way CV-QKD under a two-mode entangling-cloner
// attack, with an imperfect receiver and an optional pre-detection amplifier.
//
// Mode names follow the protocol diagram: Bob's source EPR1 is (B1, B2),
// Alice's EPR2 is (A1, A2), Eve's EPR3 is (E1, E2) plus a vacuum E0.

#include <span>
#include <string>
#include <vector>

#include "twcv/gaussian.hpp"

namespace twcv {

struct ChannelModel {
  double loss_db_per_km = 0.2;
  double distance_km = 20.0;
  /// Average of forward and backward excess noise; both paths use this value.
  double excess_noise = 0.02;

  /// T = 10^(-a d / 10), shared by the forward and backward paths.
  double transmittance() const;
};

enum class DetectionKind { homodyne, heterodyne };

struct DetectorModel {
  DetectionKind kind = DetectionKind::heterodyne;
  double efficiency = 0.552;
  double electronic_noise = 0.015;

  /// Variance of the thermal state modelling electronic noise:
  /// 1 + v_el/(1-eta) for homodyne, 1 + 2 v_el/(1-eta) for heterodyne,
  /// and 1 for a perfect detector.
  double ancilla_variance() const;
};

enum class AmplifierKind { none, psa, pia };

struct AmplifierSpec {
  AmplifierKind kind = AmplifierKind::none;
  double gain = 1.0;
  /// Variance of the EPR ancilla of a PIA; ignored for other kinds.
  double inherent_noise = 1.0;

  /// Gain actually applied: 1 when kind is none.
  double effective_gain() const { return kind == AmplifierKind::none ? 1.0 : gain; }
};

struct ProtocolParams {
  double alice_variance = 40.0;  // V_A
  double bob_variance = 40.0;    // V_B
  double alice_transmittance = 0.4;  // T_A
  double reconciliation_efficiency = 0.948;  // beta
  ChannelModel channel;
  DetectorModel detector;
  AmplifierSpec amplifier;

  /// Throws DomainError naming the violated constraint.
  void validate() const;
};

struct EveParameters {
  double splitter_transmittance;  // T_E
  double variance;                // V_E
};

struct EstimatorParams {
  double k;
};

struct Measurement {
  std::string mode;
  Quadrature quadrature;
};

double channel_transmittance(double loss_db_per_km, double distance_km);

/// T_E = 1/(1 + T T_A) and V_E = 1 + 2 T eps / (1 - T).
/// Throws SingularityError for T = 1 with eps > 0.
EveParameters eve_parameters(double transmittance, double alice_transmittance,
                             double excess_noise);

/// Estimator gain that cancels Bob's own EPR contribution in x_B5 - k x_B1x.
EstimatorParams optimal_k(const ProtocolParams& params);

/// Eight-mode state (A1, A3, B1, B3) from the closed-form entries.
CovarianceMatrix gamma_closed_form(const ProtocolParams& params);

/// Pure seven-mode state after the channel and Alice's coupler, over
/// (A1, A3, B1, B3, E1, E4, E6). Eve holds E1, E4 and E6.
CovarianceMatrix global_channel_state(const ProtocolParams& params);

/// (A1, A3, B1, B3) obtained by propagating the sources through the
/// beam-splitter network; independent of gamma_closed_form.
CovarianceMatrix gamma_by_propagation(const ProtocolParams& params);

/// Homodyne receiver: returns the state over (A1, A3, B1p, B6, F, G, Bx).
CovarianceMatrix receiver_chain_homodyne(const ProtocolParams& params);
CovarianceMatrix receiver_chain_homodyne(const ProtocolParams& params,
                                         const CovarianceMatrix& alice_bob);

/// Heterodyne receiver: returns the state over (A1, A3, I, J, F, G, B6, B7, Bx, Bp).
CovarianceMatrix receiver_chain_heterodyne(const ProtocolParams& params);
CovarianceMatrix receiver_chain_heterodyne(const ProtocolParams& params,
                                           const CovarianceMatrix& alice_bob);

/// Dispatches on params.detector.kind.
CovarianceMatrix receiver_chain(const ProtocolParams& params);

/// Sequential homodyne conditioning on each measured quadrature.
CovarianceMatrix conditional_gamma(const CovarianceMatrix& full,
                                   std::span<const Measurement> measured);

/// Bob's final measurements for the configured detector.
std::vector<Measurement> bob_measurements(DetectionKind kind);

}  // namespace twcv

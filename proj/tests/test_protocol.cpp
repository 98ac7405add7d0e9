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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "twcv/gaussian.hpp"
#include "twcv/protocol.hpp"

namespace twcv {
namespace {

using Q = Quadrature;

ProtocolParams at_distance(double d, DetectionKind kind = DetectionKind::heterodyne) {
  ProtocolParams p;
  p.channel.distance_km = d;
  p.detector.kind = kind;
  return p;
}

TEST(Channel, Transmittance) {
  EXPECT_EQ(channel_transmittance(0.2, 0.0), 1.0);
  EXPECT_NEAR(channel_transmittance(0.2, 50.0), 0.1, 1e-15);
  EXPECT_NEAR(channel_transmittance(0.2, 100.0), 0.01, 1e-16);
  EXPECT_THROW(channel_transmittance(-0.1, 1.0), DomainError);
}

TEST(Eve, SplitterAndVariance) {
  EXPECT_NEAR(eve_parameters(0.1, 0.4, 0.02).splitter_transmittance, 1.0 / 1.04, 1e-15);
  EXPECT_NEAR(1.0 / 1.04, 0.961538, 1e-6);
  EXPECT_EQ(eve_parameters(0.3, 0.4, 0.0).variance, 1.0);
  EXPECT_NEAR(eve_parameters(0.5, 0.4, 0.02).variance, 1.04, 1e-15);
}

TEST(Eve, SingularAtUnitTransmittance) {
  EXPECT_THROW(eve_parameters(1.0, 0.4, 0.02), SingularityError);
  EXPECT_NO_THROW(eve_parameters(1.0, 0.4, 0.0));
}

TEST(Detector, AncillaVariance) {
  DetectorModel d{DetectionKind::homodyne, 0.552, 0.015};
  EXPECT_NEAR(d.ancilla_variance(), 1.0 + 0.015 / 0.448, 1e-15);
  EXPECT_NEAR(d.ancilla_variance(), 1.033482, 1e-6);
  d.kind = DetectionKind::heterodyne;
  EXPECT_NEAR(d.ancilla_variance(), 1.0 + 0.03 / 0.448, 1e-15);
  d.efficiency = 1.0;
  d.electronic_noise = 0.0;
  EXPECT_EQ(d.ancilla_variance(), 1.0);
}

TEST(Params, DefaultsValidate) {
  const ProtocolParams p;
  EXPECT_EQ(p.alice_variance, 40.0);
  EXPECT_EQ(p.bob_variance, 40.0);
  EXPECT_EQ(p.reconciliation_efficiency, 0.948);
  EXPECT_EQ(p.detector.efficiency, 0.552);
  EXPECT_EQ(p.detector.electronic_noise, 0.015);
  EXPECT_EQ(p.alice_transmittance, 0.4);
  EXPECT_EQ(p.channel.excess_noise, 0.02);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, RejectsInconsistentCombinations) {
  ProtocolParams p;
  p.detector.efficiency = 1.0;
  EXPECT_THROW(p.validate(), DomainError);  // eta = 1 needs v_el = 0

  p = ProtocolParams{};
  p.amplifier.kind = AmplifierKind::psa;
  EXPECT_THROW(p.validate(), DomainError);  // psa with heterodyne

  p = ProtocolParams{};
  p.detector.kind = DetectionKind::homodyne;
  p.amplifier.kind = AmplifierKind::pia;
  EXPECT_THROW(p.validate(), DomainError);

  p = ProtocolParams{};
  p.channel.distance_km = 0.0;
  EXPECT_THROW(p.validate(), SingularityError);

  p = ProtocolParams{};
  p.alice_variance = 0.9;
  EXPECT_THROW(p.validate(), DomainError);

  p = ProtocolParams{};
  p.amplifier.gain = 0.5;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(OptimalK, NoCorrelationGivesZero) {
  ProtocolParams p = at_distance(20.0, DetectionKind::homodyne);
  p.bob_variance = 1.0;
  EXPECT_EQ(optimal_k(p).k, 0.0);
}

TEST(OptimalK, IdealLosslessHomodyne) {
  ProtocolParams p;
  p.detector = {DetectionKind::homodyne, 1.0, 0.0};
  p.alice_transmittance = 1.0;
  p.channel.distance_km = 0.0;
  p.channel.excess_noise = 0.0;
  p.bob_variance = 3.0;
  EXPECT_NEAR(optimal_k(p).k, 1.0, 1e-15);
}

TEST(OptimalK, MinimisesEstimatorVariance) {
  // Bx = s - k r and B6 = r, so Var(s - k' r) is minimal at k' = k + Cov(Bx, B6)/Var(B6).
  for (auto kind : {DetectionKind::homodyne, DetectionKind::heterodyne}) {
    ProtocolParams p = at_distance(20.0, kind);
    p.amplifier = kind == DetectionKind::homodyne ? AmplifierSpec{AmplifierKind::psa, 2.0, 1.0}
                                                  : AmplifierSpec{AmplifierKind::pia, 15.0, 1.5};
    const double k = optimal_k(p).k;
    const auto full = receiver_chain(p);
    const double argmin =
        k + full.covariance("Bx", Q::x, "B6", Q::x) / full.variance("B6", Q::x);
    EXPECT_GT(k, 0.0);
    EXPECT_NEAR(argmin, k, 1e-12 * k) << static_cast<int>(kind);
  }
}

TEST(ClosedForm, UnitAliceTransmittanceDecouplesA1B3) {
  ProtocolParams p = at_distance(20.0);
  p.alice_transmittance = 1.0;
  const auto g = gamma_closed_form(p);
  EXPECT_EQ(g.covariance("A1", Q::x, "B3", Q::x), 0.0);
  EXPECT_EQ(g.covariance("A1", Q::p, "B3", Q::p), 0.0);
}

TEST(ClosedForm, LosslessB3Variance) {
  ProtocolParams p = at_distance(0.0);
  p.channel.excess_noise = 0.0;
  p.alice_variance = 30.0;
  const auto g = gamma_closed_form(p);
  const double expected = p.alice_transmittance * p.bob_variance +
                          (1.0 - p.alice_transmittance) * p.alice_variance;
  EXPECT_NEAR(g.variance("B3", Q::x), expected, 1e-12);
}

TEST(ClosedForm, IsPhysicalOverGrid) {
  for (double eps : {0.0, 0.005, 0.02, 0.2}) {
    for (double d = 1.0; d <= 100.0; d += 11.0) {
      ProtocolParams p = at_distance(d);
      p.channel.excess_noise = eps;
      EXPECT_TRUE(gamma_closed_form(p).is_physical()) << d << " " << eps;
    }
  }
}

TEST(Propagation, AgreesWithClosedForm) {
  for (double d : {10.0, 30.0, 60.0}) {
    const ProtocolParams p = at_distance(d);
    const Matrix diff = gamma_closed_form(p).data() - gamma_by_propagation(p).data();
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-9) << d;
  }
}

TEST(Propagation, ReturnPathCoefficients) {
  // B3 = sqrt(T_A) T B2 + sqrt((1 - T_A) T) A2 + sqrt((1 - T)(1 + T T_A)) E0 + Eve terms
  // that cancel; read the coefficients back through covariances with the sources.
  ProtocolParams p = at_distance(25.0);
  p.channel.excess_noise = 0.0;
  const double t = p.channel.transmittance();
  const double ta = p.alice_transmittance;
  const double va = p.alice_variance;
  const double vb = p.bob_variance;
  const auto g = gamma_by_propagation(p);
  const double c_b2 = std::sqrt(ta) * t;
  const double c_a2 = std::sqrt((1.0 - ta) * t);
  const double c_e0 = std::sqrt((1.0 - t) * (1.0 + t * ta));
  EXPECT_NEAR(g.covariance("B1", Q::x, "B3", Q::x), c_b2 * std::sqrt(vb * vb - 1.0), 1e-12);
  EXPECT_NEAR(g.covariance("A1", Q::x, "B3", Q::x), c_a2 * std::sqrt(va * va - 1.0), 1e-12);
  EXPECT_NEAR(g.variance("B3", Q::x), c_b2 * c_b2 * vb + c_a2 * c_a2 * va + c_e0 * c_e0, 1e-10);
}

TEST(Propagation, GlobalStateIsPure) {
  for (double eps : {0.005, 0.2}) {
    ProtocolParams p = at_distance(40.0);
    p.channel.excess_noise = eps;
    const auto s = symplectic_spectrum(global_channel_state(p));
    ASSERT_EQ(s.size(), 7u);
    for (double l : s.values) EXPECT_NEAR(l, 1.0, 1e-7);
  }
}

TEST(ReceiverHomodyne, OutputModes) {
  const auto s = receiver_chain_homodyne(at_distance(20.0, DetectionKind::homodyne));
  EXPECT_EQ(s.modes(), (std::vector<std::string>{"A1", "A3", "B1p", "B6", "F", "G", "Bx"}));
}

TEST(ReceiverHomodyne, EstimatorVarianceIdeal) {
  ProtocolParams p = at_distance(20.0, DetectionKind::homodyne);
  p.detector = {DetectionKind::homodyne, 1.0, 0.0};
  const double k = optimal_k(p).k;
  const auto g = gamma_closed_form(p);
  const double vb3 = g.variance("B3", Q::x);
  const double vb1x = (p.bob_variance + 1.0) / 2.0;
  const double cov = std::sqrt(0.5) * g.covariance("B3", Q::x, "B1", Q::x);
  const auto s = receiver_chain_homodyne(p);
  EXPECT_NEAR(s.variance("Bx", Q::x), vb3 + k * k * vb1x - 2.0 * k * cov, 1e-10);
}

TEST(ReceiverHomodyne, PreservesEntropy) {
  // The detector ancilla is a pure EPR pair, so the output has the entropy of (A1, A3, B1, B3).
  for (double gain : {1.0, 2.0, 15.0}) {
    ProtocolParams p = at_distance(20.0, DetectionKind::homodyne);
    p.amplifier = {AmplifierKind::psa, gain, 1.0};
    EXPECT_NEAR(von_neumann_entropy(receiver_chain_homodyne(p)),
                von_neumann_entropy(gamma_closed_form(p)), 1e-8)
        << gain;
  }
}

TEST(ReceiverHomodyne, ConditionalStateIsPhysical) {
  ProtocolParams p = at_distance(20.0, DetectionKind::homodyne);
  p.amplifier = {AmplifierKind::psa, 2.0, 1.0};
  const auto measured = bob_measurements(p.detector.kind);
  const auto c = conditional_gamma(receiver_chain(p), measured);
  EXPECT_EQ(c.data().rows(), 12);
  const auto s = symplectic_spectrum(c);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_GE(s.min(), 1.0 - kPhysicalTolerance);
}

TEST(ReceiverHeterodyne, OutputModes) {
  const auto s = receiver_chain_heterodyne(at_distance(20.0));
  EXPECT_EQ(s.modes(), (std::vector<std::string>{"A1", "A3", "I", "J", "F", "G", "B6", "B7",
                                                 "Bx", "Bp"}));
}

TEST(ReceiverHeterodyne, UnitGainPiaMatchesBareChain) {
  ProtocolParams bare = at_distance(35.0);
  ProtocolParams amplified = bare;
  amplified.amplifier = {AmplifierKind::pia, 1.0, 1.7};
  // (I, J) carry the decoupled amplifier ancilla and differ by construction.
  const std::vector<std::string> kept{"A1", "A3", "F", "G", "B6", "B7", "Bx", "Bp"};
  const Matrix diff = receiver_chain(bare).restrict_to(kept).data() -
                      receiver_chain(amplified).restrict_to(kept).data();
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ReceiverHeterodyne, PreservesEntropy) {
  for (double noise : {1.0, 1.5, 3.0}) {
    ProtocolParams p = at_distance(20.0);
    p.amplifier = {AmplifierKind::pia, 15.0, noise};
    EXPECT_NEAR(von_neumann_entropy(receiver_chain_heterodyne(p)),
                von_neumann_entropy(gamma_closed_form(p)), 1e-8)
        << noise;
  }
}

TEST(Conditioning, OrderDoesNotMatter) {
  ProtocolParams p = at_distance(20.0);
  p.amplifier = {AmplifierKind::pia, 15.0, 1.5};
  const auto full = receiver_chain(p);
  const std::vector<Measurement> xp{{"Bx", Q::x}, {"Bp", Q::p}};
  const std::vector<Measurement> px{{"Bp", Q::p}, {"Bx", Q::x}};
  const Matrix diff = conditional_gamma(full, xp).data() - conditional_gamma(full, px).data();
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Conditioning, DecoupledVacuumChangesNothing) {
  const auto full = receiver_chain(at_distance(20.0));
  const auto padded = tensor(full, vacuum_state({"V"}));
  const std::vector<Measurement> m{{"V", Q::x}};
  const Matrix diff = conditional_gamma(padded, m).data() - full.data();
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Measurements, PerDetectorKind) {
  EXPECT_EQ(bob_measurements(DetectionKind::homodyne).size(), 1u);
  const auto het = bob_measurements(DetectionKind::heterodyne);
  ASSERT_EQ(het.size(), 2u);
  EXPECT_EQ(het[1].mode, "Bp");
  EXPECT_EQ(het[1].quadrature, Q::p);
}

}  // namespace
}  // namespace twcv

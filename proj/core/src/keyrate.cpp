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

#include "twcv/keyrate.hpp"

#include <cmath>
#include <sstream>

namespace twcv {
namespace {

double quadrature_information(double alice_variance, double covariance, double bob_variance,
                              double* conditional) {
  if (!(bob_variance > 0.0)) {
    throw DomainError("mutual information: Bob's estimator variance is not positive");
  }
  const double cond = alice_variance - covariance * covariance / bob_variance;
  if (!(cond > 0.0)) {
    std::ostringstream os;
    os << "mutual information: conditional variance " << cond << " is not positive";
    throw DomainError(os.str());
  }
  if (conditional != nullptr) *conditional = cond;
  return 0.5 * std::log2(alice_variance / cond);
}

}  // namespace

MutualInformation mutual_information(const ProtocolParams& params,
                                     const CovarianceMatrix& receiver_state) {
  const double v_ax = 0.5 * (params.alice_variance + 1.0);
  const double split = std::sqrt(0.5);

  double conditional = 0.0;
  const double ix = quadrature_information(
      v_ax, split * receiver_state.covariance("A1", Quadrature::x, "Bx", Quadrature::x),
      receiver_state.variance("Bx", Quadrature::x), &conditional);
  double bits = ix;
  if (params.detector.kind == DetectionKind::heterodyne) {
    bits += quadrature_information(
        v_ax, split * receiver_state.covariance("A1", Quadrature::p, "Bp", Quadrature::p),
        receiver_state.variance("Bp", Quadrature::p), nullptr);
  }
  return {bits, v_ax, conditional};
}

HolevoBound holevo_bound(const CovarianceMatrix& unconditional,
                         const CovarianceMatrix& conditional) {
  auto s_uncond = symplectic_spectrum(unconditional);
  auto s_cond = symplectic_spectrum(conditional);
  const double chi = von_neumann_entropy(s_uncond) - von_neumann_entropy(s_cond);
  return {chi, std::move(s_uncond), std::move(s_cond)};
}

KeyRateResult secret_key_rate(const ProtocolParams& params) {
  params.validate();
  const auto alice_bob = gamma_closed_form(params);
  const auto receiver = params.detector.kind == DetectionKind::homodyne
                            ? receiver_chain_homodyne(params, alice_bob)
                            : receiver_chain_heterodyne(params, alice_bob);
  const auto info = mutual_information(params, receiver);
  const auto measured = bob_measurements(params.detector.kind);
  const auto conditional = conditional_gamma(receiver, measured);
  auto holevo = holevo_bound(alice_bob, conditional);

  KeyRateResult r{
      .key_rate = params.reconciliation_efficiency * info.bits - holevo.chi,
      .mutual_information = info.bits,
      .holevo = holevo.chi,
      .reconciliation_efficiency = params.reconciliation_efficiency,
      .alice_variance = info.alice_variance,
      .conditional_variance = info.conditional_variance,
      .spectrum_unconditional = std::move(holevo.unconditional),
      .spectrum_conditional = std::move(holevo.conditional),
      .k_used = optimal_k(params),
  };
  return r;
}

}  // namespace twcv

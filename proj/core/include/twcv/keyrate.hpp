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

#include "twcv/gaussian.hpp"
#include "twcv/protocol.hpp"

namespace twcv {

struct MutualInformation {
  double bits;
  double alice_variance;       // V_Ax
  double conditional_variance; // V_Ax|Bx
};

struct HolevoBound {
  double chi;
  SymplecticSpectrum unconditional;
  SymplecticSpectrum conditional;
};

struct KeyRateResult {
  double key_rate;            // K, bits per pulse
  double mutual_information;  // I(a:b), before the beta factor
  double holevo;              // chi_BE
  double reconciliation_efficiency;
  double alice_variance;
  double conditional_variance;
  SymplecticSpectrum spectrum_unconditional;
  SymplecticSpectrum spectrum_conditional;
  EstimatorParams k_used;
};

/// Classical information between Alice's heterodyne outcome on A1 and Bob's
/// estimator(s) in `receiver_state` (output of a receiver chain).
///
/// Alice's x outcome is the x quadrature of A1 after a balanced split with
/// vacuum, so V_Ax = (V_A + 1)/2 and Cov(x_Ax, x_Bx) = Cov(x_A1, x_Bx)/sqrt(2).
/// Heterodyne receivers count the x and p estimators.
MutualInformation mutual_information(const ProtocolParams& params,
                                     const CovarianceMatrix& receiver_state);

/// chi_BE = S(unconditional) - S(conditional).
HolevoBound holevo_bound(const CovarianceMatrix& unconditional,
                         const CovarianceMatrix& conditional);

/// K = beta I(a:b) - chi_BE under reverse reconciliation. Negative values are
/// returned as computed.
KeyRateResult secret_key_rate(const ProtocolParams& params);

}  // namespace twcv

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

#include <benchmark/benchmark.h>

#include "twcv/analysis.hpp"
#include "twcv/gaussian.hpp"
#include "twcv/keyrate.hpp"
#include "twcv/montecarlo.hpp"

namespace {

using namespace twcv;

ProtocolParams heterodyne_pia() {
  ProtocolParams p;
  p.amplifier = {AmplifierKind::pia, 15.0, 1.5};
  return p;
}

void BM_SymplecticSpectrum(benchmark::State& state) {
  const auto full = receiver_chain(heterodyne_pia());
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_spectrum(full));
}
BENCHMARK(BM_SymplecticSpectrum);

void BM_SecretKeyRateHomodyne(benchmark::State& state) {
  ProtocolParams p;
  p.detector.kind = DetectionKind::homodyne;
  p.amplifier = {AmplifierKind::psa, 2.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(secret_key_rate(p));
}
BENCHMARK(BM_SecretKeyRateHomodyne);

void BM_SecretKeyRateHeterodyne(benchmark::State& state) {
  const auto p = heterodyne_pia();
  for (auto _ : state) benchmark::DoNotOptimize(secret_key_rate(p));
}
BENCHMARK(BM_SecretKeyRateHeterodyne);

void BM_TolerableNoise(benchmark::State& state) {
  const auto p = heterodyne_pia();
  for (auto _ : state) benchmark::DoNotOptimize(find_tolerable_noise(p, 30.0, 58.9582228661));
}
BENCHMARK(BM_TolerableNoise)->Unit(benchmark::kMillisecond);

void BM_SampleProtocol(benchmark::State& state) {
  const auto p = heterodyne_pia();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_protocol(p, 1, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleProtocol)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

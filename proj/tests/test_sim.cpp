// Copyright 2026 The povmforge Authors
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
#include <random>

#include <gtest/gtest.h>

#include "povmforge/sim.hpp"
#include "test_support.hpp"

namespace povmforge {
namespace {

using testing::random_params;
using testing::random_state;
using testing::random_unitary;
using testing::skewed_set;
using testing::uniform_set;

const Circuit& uniform_circuit() {
  static const Circuit c = compile_dilation(uniform_set(), CompileSource::oracle);
  return c;
}

const Circuit& skewed_circuit() {
  static const Circuit c = compile_dilation(skewed_set(), CompileSource::oracle);
  return c;
}

TEST(Rng, SplitMixReferenceAndRandomAccess) {
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  SplitMix64 h(1234);
  for (std::uint64_t n = 1; n <= 1000; ++n) ASSERT_EQ(h(), SplitMix64::nth(1234, n));
  EXPECT_GE(to_unit_interval(0), 0.0);
  EXPECT_LT(to_unit_interval(~0ULL), 1.0);
}

TEST(CircuitUnitary, EmptyAndCnot) {
  EXPECT_EQ(max_abs(circuit_unitary({2, {}}) - CMatrix::identity(4)), 0.0);
  const CMatrix cx = circuit_unitary({2, {CnotGate{0, 1}}});
  const CMatrix want{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  EXPECT_EQ(max_abs(cx - want), 0.0);
}

TEST(Statevector, RejectsBadAmplitudes) {
  EXPECT_THROW(Statevector(2, CVector(3)), DimensionError);
  EXPECT_THROW(Statevector(1, CVector{1.0, 1.0}), StructureError);
}

TEST(ApplyGate, BitFlipOnMostSignificantQubit) {
  const Statevector s = apply_gate(Statevector::basis(5, 0), SingleGate{0, pauli_x()});
  EXPECT_EQ(s.amplitudes()[16], Complex(1.0));
}

TEST(ApplyGate, HadamardTwice) {
  std::mt19937_64 rng(61);
  const double h = 1.0 / std::sqrt(2.0);
  const SingleGate had{2, CMatrix{{h, h}, {h, -h}}};
  const Statevector s(3, random_state(rng, 8));
  const Statevector back = apply_gate(apply_gate(s, had), had);
  EXPECT_LT(max_abs(back.amplitudes() - s.amplitudes()), 1e-14);
}

TEST(ApplyGate, MatchesDenseProduct) {
  std::mt19937_64 rng(62);
  for (std::size_t t = 0; t < 4; ++t) {
    const SingleGate g{t, random_unitary(rng, 2)};
    const Statevector s(4, random_state(rng, 16));
    const CVector want = multiply(circuit_unitary({4, {g}}), s.amplitudes());
    EXPECT_LT(max_abs(apply_gate(s, g).amplitudes() - want), 1e-12);
  }
}

TEST(Run, EmptyCircuitAndColumns) {
  std::mt19937_64 rng(63);
  const Statevector s(3, random_state(rng, 8));
  EXPECT_EQ(max_abs(run({3, {}}, s).amplitudes() - s.amplitudes()), 0.0);
  Circuit c{3, {SingleGate{1, random_unitary(rng, 2)}, CnotGate{2, 0},
                McuGate{{{0, false}, {1, true}}, 2, random_unitary(rng, 2)}}};
  const CMatrix u = circuit_unitary(c);
  for (std::size_t j = 0; j < 8; ++j)
    EXPECT_LT(max_abs(run(c, Statevector::basis(3, j)).amplitudes() - u.column(j)), 1e-14);
}

TEST(Run, CompiledUniformCircuitOnCertainInput) {
  const CVector psi1 = build_states(uniform_set())[0];
  const Statevector out = run(uniform_circuit(), {5, kron(psi1, CVector::basis(8, 0))});
  CVector block(4);
  for (std::size_t s = 0; s < 4; ++s) block[s] = out.amplitudes()[global_index(s, 0)];
  EXPECT_LT(phase_aligned_max_deviation(block, psi1), 1e-8);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t a = 1; a < 8; ++a) EXPECT_LT(std::abs(out.amplitudes()[global_index(s, a)]), 1e-8);
}

TEST(Measure, CertainOutcome) {
  const CVector psi1 = build_states(uniform_set())[0];
  const Statevector d = dilate(uniform_set(), psi1, SampleRoute::circuit, &uniform_circuit());
  for (std::uint64_t shot = 0; shot < 20; ++shot) {
    const MeasurementRecord m = measure_ancilla(d, 7, shot);
    EXPECT_EQ(m.outcome, 1);
    EXPECT_NEAR(m.probability, 1.0, 1e-8);  // compiled-circuit accuracy
    EXPECT_LT(phase_aligned_max_deviation(m.post_state, psi1), 1e-8);
  }
}

TEST(Measure, SkewedSetCollapse) {
  const PovmParams b = skewed_set();
  const CVector psi1 = build_states(b)[0];
  const Statevector d = dilate(b, CVector::basis(4, 0), SampleRoute::circuit, &skewed_circuit());
  bool saw_first = false;
  for (std::uint64_t shot = 0; shot < 200; ++shot) {
    const MeasurementRecord m = measure_ancilla(d, 99, shot);
    EXPECT_NE(m.outcome, 5);
    if (m.outcome == 1) {
      saw_first = true;
      EXPECT_LT(phase_aligned_max_deviation(m.post_state, psi1), 1e-8);
    }
  }
  EXPECT_TRUE(saw_first);
}

TEST(Measure, CollapseMatchesRootElementOnRandomInputs) {
  std::mt19937_64 rng(64);
  const PovmParams b = skewed_set();
  const auto roots = sqrt_elements(build_povm(b));
  for (int k = 0; k < 10; ++k) {
    const CVector psi = random_state(rng, 4);
    const Statevector d = dilate(b, psi, SampleRoute::circuit, &skewed_circuit());
    const auto probs = ancilla_distribution(d);
    for (std::size_t o = 0; o < 5; ++o) {
      if (probs[o] <= 1e-6) continue;
      const CVector want = normalized(multiply(roots[o], psi));
      EXPECT_LT(phase_aligned_max_deviation(conditional_system_state(d, o), want), 1e-8);
    }
  }
}

TEST(Measure, UnreachableReadoutIsAnError) {
  const Statevector bad = Statevector::basis(5, global_index(0, 6));
  EXPECT_THROW(measure_ancilla(bad, 1), UnreachableOutcome);
}

TEST(Sampling, SkewedSetBasisZero) {
  const Histogram h =
      sample_povm(skewed_set(), CVector::basis(4, 0), 100000, 42, SampleRoute::matrix);
  const double sigma = std::sqrt(100000 * 0.25 * 0.75);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(h.counts[k] - 25000.0), 5 * sigma);
  EXPECT_EQ(h.counts[4], 0u);
}

TEST(Sampling, CertainOutcomeTakesEveryShot) {
  const CVector psi1 = build_states(uniform_set())[0];
  const Histogram h = sample_povm(uniform_set(), psi1, 5000, 3, SampleRoute::matrix);
  EXPECT_EQ(h.counts[0], 5000u);
}

TEST(Sampling, SeedDeterminesHistogram) {
  const CVector in = CVector::basis(4, 1);
  const Histogram a = sample_povm(skewed_set(), in, 10000, 5, SampleRoute::matrix);
  const Histogram b = sample_povm(skewed_set(), in, 10000, 5, SampleRoute::matrix);
  const Histogram c = sample_povm(skewed_set(), in, 10000, 6, SampleRoute::matrix);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, c.counts);
  const Histogram via_circuit =
      sample_povm(skewed_set(), in, 10000, 5, SampleRoute::circuit, &skewed_circuit());
  EXPECT_EQ(a.counts, via_circuit.counts);
}

TEST(Sampling, RejectsZeroShots) {
  EXPECT_THROW(sample_povm(skewed_set(), CVector::basis(4, 0), 0, 1, SampleRoute::matrix),
               RangeError);
}

TEST(Sampling, ChiSquareAcrossSeeds) {
  // 1% critical value with 4 degrees of freedom.
  constexpr double kCritical = 13.277;
  std::mt19937_64 rng(65);
  const PovmParams p = random_params(rng);
  const CVector psi = random_state(rng, 4);
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Histogram h = sample_povm(p, psi, 4000, seed, SampleRoute::matrix);
    double chi = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      const double e = h.expected[k] * 4000.0;
      chi += (h.counts[k] - e) * (h.counts[k] - e) / e;
    }
    if (chi > kCritical) ++rejections;
  }
  EXPECT_LE(rejections, 5);
}

}  // namespace
}  // namespace povmforge

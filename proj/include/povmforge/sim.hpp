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

// Statevector simulation of the dilated measurement: two system qubits
// (0, 1) and three ancillas (2, 3, 4), qubit 0 most significant.

#ifndef POVMFORGE_SIM_HPP
#define POVMFORGE_SIM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "povmforge/circuit.hpp"
#include "povmforge/dilation.hpp"
#include "povmforge/errors.hpp"
#include "povmforge/matkernel.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/rng.hpp"
#include "povmforge/synth.hpp"

namespace povmforge {

class Statevector {
 public:
  Statevector(std::size_t nqubits, CVector amplitudes)
      : nqubits_(nqubits), amps_(std::move(amplitudes)) {
    if (amps_.dim() != (std::size_t{1} << nqubits))
      throw DimensionError("Statevector: need 2^n amplitudes");
    if (std::abs(norm(amps_) - 1.0) > kDefaultTolerance)
      throw StructureError("Statevector: amplitudes are not normalized");
  }

  static Statevector basis(std::size_t nqubits, std::size_t index) {
    return {nqubits, CVector::basis(std::size_t{1} << nqubits, index)};
  }

  std::size_t nqubits() const { return nqubits_; }
  const CVector& amplitudes() const { return amps_; }

  friend Statevector apply_gate(const Statevector& state, const Gate& gate);

 private:
  Statevector(std::size_t nqubits, CVector amplitudes, bool /*unchecked*/)
      : nqubits_(nqubits), amps_(std::move(amplitudes)) {}

  std::size_t nqubits_;
  CVector amps_;
};

inline Statevector apply_gate(const Statevector& state, const Gate& gate) {
  validate_gate(gate, state.nqubits_);
  CVector amps = state.amps_;
  apply_gate_unchecked(amps.entries(), state.nqubits_, gate);
  return {state.nqubits_, std::move(amps), true};
}

inline Statevector run(const Circuit& circ, const Statevector& state) {
  if (circ.qubits != state.nqubits()) throw DimensionError("run: qubit count mismatch");
  validate_circuit(circ);
  CVector amps = state.amplitudes();
  for (const auto& g : circ.gates) apply_gate_unchecked(amps.entries(), circ.qubits, g);
  // Rounding over long circuits stays far inside the constructor's 1e-10.
  return {circ.qubits, std::move(amps)};
}

inline constexpr std::size_t kDilatedQubits = 5;

struct MeasurementRecord {
  int outcome = 0;             // 1..5
  std::size_t ancilla_bits = 0;  // 0b000..0b100
  double probability = 0.0;
  CVector post_state;          // normalized 2-qubit state
};

/// Born probabilities of the eight ancilla readouts. Values below 1e-15 are
/// set to exactly zero.
inline std::array<double, kAncillaDim> ancilla_distribution(const Statevector& state) {
  if (state.nqubits() != kDilatedQubits) throw DimensionError("ancilla_distribution: need 5 qubits");
  std::array<double, kAncillaDim> probs{};
  for (std::size_t s = 0; s < kSystemDim; ++s)
    for (std::size_t a = 0; a < kAncillaDim; ++a)
      probs[a] += std::norm(state.amplitudes()[global_index(s, a)]);
  for (auto& p : probs)
    if (p < 1e-15) p = 0.0;
  return probs;
}

namespace detail {

inline constexpr double kUnreachableTol = 1e-9;

/// Cumulative sampling table over ancilla readouts. Unreachable readouts
/// (101, 110, 111) with probability <= 1e-9 are dropped as rounding dust.
struct AncillaSampler {
  std::array<double, kAncillaDim> probs{};
  std::array<double, kAncillaDim> cumulative{};

  explicit AncillaSampler(const Statevector& state) : probs(ancilla_distribution(state)) {
    for (std::size_t a = kNumOutcomes; a < kAncillaDim; ++a)
      if (probs[a] <= kUnreachableTol) probs[a] = 0.0;
    double acc = 0.0;
    for (std::size_t a = 0; a < kAncillaDim; ++a) cumulative[a] = acc += probs[a];
  }

  std::size_t draw(double uniform) const {
    const double x = uniform * cumulative.back();
    for (std::size_t a = 0; a < kAncillaDim; ++a)
      if (probs[a] > 0.0 && x < cumulative[a]) return a;
    // uniform * total rounded up to total: take the last populated readout.
    for (std::size_t a = kAncillaDim; a-- > 0;)
      if (probs[a] > 0.0) return a;
    throw StructureError("ancilla sampler: empty distribution");
  }
};

inline std::size_t checked_outcome(std::size_t bits, double probability) {
  if (bits >= kNumOutcomes)
    throw UnreachableOutcome("ancilla readout " + std::to_string(bits) + " sampled with probability " +
                             std::to_string(probability));
  return bits;
}

}  // namespace detail

/// Normalized system-qubit block of `state` conditioned on ancilla `bits`.
inline CVector conditional_system_state(const Statevector& state, std::size_t bits) {
  CVector block(kSystemDim);
  for (std::size_t s = 0; s < kSystemDim; ++s) block[s] = state.amplitudes()[global_index(s, bits)];
  return normalized(block);
}

/// One Born-rule readout of the ancillas, using shot `shot` of the seed's stream.
inline MeasurementRecord measure_ancilla(const Statevector& state, std::uint64_t seed,
                                         std::uint64_t shot = 0) {
  const detail::AncillaSampler sampler(state);
  const std::size_t bits = sampler.draw(shot_uniform(seed, shot));
  detail::checked_outcome(bits, sampler.probs[bits]);
  return {static_cast<int>(bits) + 1, bits, sampler.probs[bits],
          conditional_system_state(state, bits)};
}

enum class SampleRoute { matrix, circuit };

/// U (|input> (x) |000>), with U the oracle dilation or its compiled circuit.
inline Statevector dilate(const PovmParams& params, const CVector& input, SampleRoute route,
                          const Circuit* compiled = nullptr) {
  if (input.dim() != kSystemDim) throw DimensionError("dilate: need a 2-qubit input");
  const CVector start = kron(input, CVector::basis(kAncillaDim, 0));
  if (route == SampleRoute::matrix)
    return {kDilatedQubits, multiply(build_oracle_dilation(params).matrix, start)};
  if (compiled != nullptr) return run(*compiled, {kDilatedQubits, start});
  return run(compile_dilation(params, CompileSource::oracle), {kDilatedQubits, start});
}

struct Histogram {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::array<std::uint64_t, kNumOutcomes> counts{};
  std::array<double, kNumOutcomes> expected{};
};

/// Counts of outcomes 1..5 over `shots` readouts of a fixed dilated state.
inline std::array<std::uint64_t, kNumOutcomes> sample_outcomes(const Statevector& dilated,
                                                               std::uint64_t shots,
                                                               std::uint64_t seed) {
  if (shots == 0) throw RangeError("shots must be at least 1");
  const detail::AncillaSampler sampler(dilated);
  std::array<std::uint64_t, kNumOutcomes> counts{};
  for (std::uint64_t k = 0; k < shots; ++k) {
    const std::size_t bits = sampler.draw(shot_uniform(seed, k));
    ++counts[detail::checked_outcome(bits, sampler.probs[bits])];
  }
  return counts;
}

/// Repeats prepare -> dilate -> measure. The prepared and dilated state is
/// identical every shot, so it is computed once.
inline Histogram sample_povm(const PovmParams& params, const CVector& input, std::uint64_t shots,
                             std::uint64_t seed, SampleRoute route,
                             const Circuit* compiled = nullptr) {
  if (shots == 0) throw RangeError("shots must be at least 1");
  Histogram h;
  h.shots = shots;
  h.seed = seed;
  h.expected = outcome_probabilities(build_povm(params), input).probs;
  h.counts = sample_outcomes(dilate(params, input, route, compiled), shots, seed);
  return h;
}

}  // namespace povmforge

#endif  // POVMFORGE_SIM_HPP

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

// Compilation of two-level unitaries to circuits.
//
//   two-level op --(Gray-code routing)--> multi-controlled gates
//                --(recursive square-root lowering)--> CNOT + single-qubit gates
//
// Routing and the central controlled block are phase-exact. The lowering
// stage is allowed a global phase by contract; the constructions used here
// happen to be exact as well.

#ifndef POVMFORGE_SYNTH_HPP
#define POVMFORGE_SYNTH_HPP

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "povmforge/circuit.hpp"
#include "povmforge/decompose.hpp"
#include "povmforge/dilation.hpp"
#include "povmforge/errors.hpp"
#include "povmforge/matkernel.hpp"

namespace povmforge {

/// Basis indices from i to j flipping one differing bit at a time, least
/// significant bit first.
inline std::vector<std::size_t> gray_path(std::size_t i, std::size_t j, std::size_t nbits) {
  if (nbits >= 64) throw DimensionError("gray_path: too many bits");
  const std::size_t limit = std::size_t{1} << nbits;
  if (i >= limit || j >= limit) throw DimensionError("gray_path: index out of range");
  if (i == j) throw DimensionError("gray_path: endpoints coincide");
  std::vector<std::size_t> path{i};
  std::size_t cur = i;
  for (std::size_t diff = i ^ j; diff != 0; diff &= diff - 1) {
    cur ^= diff & (~diff + 1);  // lowest set bit
    path.push_back(cur);
  }
  return path;
}

namespace detail {

inline bool near_identity(const CMatrix& m, double eps) {
  return std::abs(m(0, 0) - 1.0) <= eps && std::abs(m(1, 1) - 1.0) <= eps &&
         std::abs(m(0, 1)) <= eps && std::abs(m(1, 0)) <= eps;
}

/// Gate flipping `bit` of basis states that agree with `state` on all other bits.
inline McuGate bit_gate(std::size_t state, std::size_t bit, std::size_t nqubits,
                        const CMatrix& block) {
  McuGate g;
  g.target = nqubits - 1 - bit;
  g.matrix = block;
  for (std::size_t q = 0; q < nqubits; ++q) {
    if (q == g.target) continue;
    g.controls.push_back({q, (state & qubit_mask(q, nqubits)) != 0});
  }
  return g;
}

inline Gate as_gate(McuGate g) {
  if (g.controls.empty()) return SingleGate{g.target, std::move(g.matrix)};
  return g;
}

}  // namespace detail

/// Circuit equal to embed(op) without any global phase: route i along the
/// Gray path to the neighbour of j with multi-controlled X gates, apply the
/// block on the last differing qubit, then undo the routing.
inline Circuit synthesize_two_level(const TwoLevelOp& op, std::size_t nqubits) {
  check_op(op, std::size_t{1} << nqubits);
  detail::check_block(op.block);
  Circuit circ{nqubits, {}};
  if (detail::near_identity(op.block, 0.0)) return circ;

  const auto path = gray_path(op.i, op.j, nqubits);
  const std::size_t m = path.size() - 1;  // number of bit flips
  std::vector<Gate> routing;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::size_t bit = std::countr_zero(path[k] ^ path[k + 1]);
    routing.push_back(detail::as_gate(detail::bit_gate(path[k], bit, nqubits, pauli_x())));
  }
  circ.gates = routing;

  // The amplitude of i now sits at path[m-1], which differs from j in one bit.
  const std::size_t from = path[m - 1];
  const std::size_t bit = std::countr_zero(from ^ op.j);
  CMatrix block = op.block;
  if (from & (std::size_t{1} << bit)) {
    // i is the |1> side of the target qubit: conjugate by X.
    block = CMatrix{{op.block(1, 1), op.block(1, 0)}, {op.block(0, 1), op.block(0, 0)}};
  }
  circ.gates.push_back(detail::as_gate(detail::bit_gate(from, bit, nqubits, block)));
  circ.gates.insert(circ.gates.end(), routing.rbegin(), routing.rend());
  return circ;
}

// ---------------------------------------------------------------------------
// Lowering

/// Exact square root V of a 2x2 unitary (V * V = U), itself unitary. Uses the
/// principal root of the first eigenvalue and picks the sign of the second
/// root so that s1 + s2 stays away from zero.
inline CMatrix sqrt_unitary_2x2(const CMatrix& u) {
  const Complex tr = u(0, 0) + u(1, 1);
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const Complex disc = std::sqrt(tr * tr / 4.0 - det);
  const Complex l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
  const Complex s1 = std::sqrt(l1);
  Complex s2 = std::sqrt(l2);
  if (std::abs(s1 - s2) > std::abs(s1 + s2)) s2 = -s2;
  const Complex sum = s1 + s2;
  CMatrix v = u;
  v(0, 0) += s1 * s2;
  v(1, 1) += s1 * s2;
  return (1.0 / sum) * v;
}

/// u = e^{i phase} Rz(beta) Ry(gamma) Rz(delta) with
/// Rz(x) = diag(e^{-ix/2}, e^{ix/2}), Ry(x) = [[cos x/2, -sin x/2], [sin x/2, cos x/2]].
struct ZyzAngles {
  double phase = 0, beta = 0, gamma = 0, delta = 0;
};

inline ZyzAngles zyz_decompose(const CMatrix& u) {
  constexpr double kTiny = 1e-14;
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  ZyzAngles out;
  out.phase = std::arg(det) / 2.0;
  const Complex unphase = std::polar(1.0, -out.phase);
  const Complex a = unphase * u(0, 0);
  const Complex b = unphase * u(1, 0);
  out.gamma = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double sum = std::abs(a) > kTiny ? -2.0 * std::arg(a) : 0.0;  // beta + delta
  const double dif = std::abs(b) > kTiny ? 2.0 * std::arg(b) : 0.0;   // beta - delta
  out.beta = (sum + dif) / 2.0;
  out.delta = (sum - dif) / 2.0;
  return out;
}

inline CMatrix rz(double x) {
  return CMatrix{{std::polar(1.0, -x / 2.0), 0.0}, {0.0, std::polar(1.0, x / 2.0)}};
}

inline CMatrix ry(double x) {
  const double c = std::cos(x / 2.0), s = std::sin(x / 2.0);
  return CMatrix{{c, -s}, {s, c}};
}

namespace detail {

inline constexpr double kSkipEps = 1e-15;

inline void push_single(std::vector<Gate>& out, std::size_t target, CMatrix m) {
  if (!near_identity(m, kSkipEps)) out.push_back(SingleGate{target, std::move(m)});
}

inline bool is_pauli_x(const CMatrix& m) {
  return std::abs(m(0, 0)) <= kSkipEps && std::abs(m(1, 1)) <= kSkipEps &&
         std::abs(m(0, 1) - 1.0) <= kSkipEps && std::abs(m(1, 0) - 1.0) <= kSkipEps;
}

/// Singly-controlled U as C, CNOT, B, CNOT, A on the target and a phase on
/// the control, with ABC = I and e^{i phase} A X B X C = U.
inline void lower_controlled(std::vector<Gate>& out, std::size_t control, std::size_t target,
                             const CMatrix& u) {
  if (near_identity(u, kSkipEps)) return;
  if (is_pauli_x(u)) {
    out.push_back(CnotGate{control, target});
    return;
  }
  const ZyzAngles z = zyz_decompose(u);
  push_single(out, target, rz((z.delta - z.beta) / 2.0));
  out.push_back(CnotGate{control, target});
  push_single(out, target, multiply(ry(-z.gamma / 2.0), rz(-(z.delta + z.beta) / 2.0)));
  out.push_back(CnotGate{control, target});
  push_single(out, target, multiply(rz(z.beta), ry(z.gamma / 2.0)));
  push_single(out, control, CMatrix{{1.0, 0.0}, {0.0, std::polar(1.0, z.phase)}});
}

/// C^k(U) with positive controls, ancilla-free:
///   C(V)[last->t], C^{k-1}(X)[rest->last], C(V^dag)[last->t],
///   C^{k-1}(X)[rest->last], C^{k-1}(V)[rest->t],   V^2 = U.
inline void lower_positive(std::vector<Gate>& out, std::span<const std::size_t> controls,
                           std::size_t target, const CMatrix& u) {
  if (controls.empty()) {
    push_single(out, target, u);
    return;
  }
  if (controls.size() == 1) {
    lower_controlled(out, controls[0], target, u);
    return;
  }
  if (near_identity(u, kSkipEps)) return;
  const CMatrix v = sqrt_unitary_2x2(u);
  const CMatrix v_dag = adjoint(v);
  const std::size_t last = controls.back();
  const auto rest = controls.first(controls.size() - 1);
  lower_controlled(out, last, target, v);
  lower_positive(out, rest, last, pauli_x());
  lower_controlled(out, last, target, v_dag);
  lower_positive(out, rest, last, pauli_x());
  lower_positive(out, rest, target, v);
}

}  // namespace detail

/// Replaces every mcu gate with CNOT and single-qubit gates. Negative
/// controls are realised by X conjugation.
inline Circuit lower_multicontrolled(const Circuit& circ) {
  validate_circuit(circ);
  Circuit out{circ.qubits, {}};
  for (const auto& gate : circ.gates) {
    const auto* mcu = std::get_if<McuGate>(&gate);
    if (mcu == nullptr) {
      out.gates.push_back(gate);
      continue;
    }
    std::vector<std::size_t> positive;
    std::vector<std::size_t> flipped;
    for (const auto& c : mcu->controls) {
      positive.push_back(c.qubit);
      if (!c.polarity) flipped.push_back(c.qubit);
    }
    for (auto q : flipped) out.gates.push_back(SingleGate{q, pauli_x()});
    detail::lower_positive(out.gates, positive, mcu->target, mcu->matrix);
    for (auto q : flipped) out.gates.push_back(SingleGate{q, pauli_x()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end

enum class CompileSource { oracle, paper_product };

struct Compilation {
  CMatrix target;             // the matrix the circuit implements
  TwoLevelSeq factors;        // two-level factorization of target
  Circuit routed;             // mcu-level circuit
  Circuit lowered;            // CNOT + single-qubit circuit
};

/// Circuit whose time-ordered product equals reconstruct(seq).
inline Circuit synthesize_sequence(const TwoLevelSeq& seq, std::size_t nqubits) {
  if (seq.dim != (std::size_t{1} << nqubits)) throw DimensionError("synthesize_sequence: dim");
  Circuit out{nqubits, {}};
  for (auto it = seq.ops.rbegin(); it != seq.ops.rend(); ++it)
    out.append(synthesize_two_level(*it, nqubits));
  return out;
}

inline Compilation compile_pipeline(const PovmParams& params, CompileSource source) {
  constexpr std::size_t kQubits = 5;
  Compilation out;
  if (source == CompileSource::oracle) {
    out.target = build_oracle_dilation(params).matrix;
    out.factors = two_level_decompose(out.target);
  } else {
    out.factors = paper_factorization(params);
    out.target = reconstruct(out.factors);
  }
  out.routed = synthesize_sequence(out.factors, kQubits);
  out.lowered = lower_multicontrolled(out.routed);
  return out;
}

inline Circuit compile_dilation(const PovmParams& params, CompileSource source) {
  return compile_pipeline(params, source).lowered;
}

}  // namespace povmforge

#endif  // POVMFORGE_SYNTH_HPP

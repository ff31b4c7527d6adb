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

// Gate-level circuits over n qubits.
//
// Qubit 0 is the most significant bit of a basis index: on n qubits, qubit k
// is bit (n - 1 - k). Gates are applied left to right in time order.

#ifndef POVMFORGE_CIRCUIT_HPP
#define POVMFORGE_CIRCUIT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "povmforge/errors.hpp"
#include "povmforge/matkernel.hpp"

namespace povmforge {

struct Control {
  std::size_t qubit = 0;
  bool polarity = true;  // true: fires on |1>, false: fires on |0>

  friend bool operator==(const Control&, const Control&) = default;
};

struct SingleGate {
  std::size_t target = 0;
  CMatrix matrix;
};

struct CnotGate {
  std::size_t control = 0;
  std::size_t target = 0;
};

/// Multi-controlled single-qubit unitary; intermediate representation only.
struct McuGate {
  std::vector<Control> controls;
  std::size_t target = 0;
  CMatrix matrix;
};

using Gate = std::variant<SingleGate, CnotGate, McuGate>;

struct Circuit {
  std::size_t qubits = 0;
  std::vector<Gate> gates;

  void append(const Circuit& other) {
    if (other.qubits != qubits) throw DimensionError("append: qubit count mismatch");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  }
};

inline constexpr std::size_t kMaxDenseQubits = 6;

inline const CMatrix& pauli_x() {
  static const CMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  return x;
}

constexpr std::size_t qubit_mask(std::size_t qubit, std::size_t nqubits) {
  return std::size_t{1} << (nqubits - 1 - qubit);
}

namespace detail {

inline void check_block(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("gate matrix must be 2x2");
  if (unitarity_defect(m) > 1e-12) throw StructureError("gate matrix is not unitary");
}

inline void check_qubit(std::size_t q, std::size_t n) {
  if (q >= n) throw DimensionError("qubit " + std::to_string(q) + " out of range");
}

}  // namespace detail

inline void validate_gate(const Gate& gate, std::size_t nqubits) {
  std::visit(
      [nqubits](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SingleGate>) {
          detail::check_qubit(g.target, nqubits);
          detail::check_block(g.matrix);
        } else if constexpr (std::is_same_v<T, CnotGate>) {
          detail::check_qubit(g.control, nqubits);
          detail::check_qubit(g.target, nqubits);
          if (g.control == g.target) throw DimensionError("cnot: control equals target");
        } else {
          detail::check_qubit(g.target, nqubits);
          detail::check_block(g.matrix);
          std::size_t seen = qubit_mask(g.target, nqubits);
          for (const auto& c : g.controls) {
            detail::check_qubit(c.qubit, nqubits);
            const std::size_t m = qubit_mask(c.qubit, nqubits);
            if (seen & m) throw DimensionError("mcu: repeated qubit");
            seen |= m;
          }
        }
      },
      gate);
}

inline void validate_circuit(const Circuit& circ) {
  for (const auto& g : circ.gates) validate_gate(g, circ.qubits);
}

namespace detail {

// Applies a 2x2 block to every amplitude pair (i, i | target) whose index
// matches (i & ctrl_mask) == ctrl_value.
inline void apply_block(std::span<Complex> amps, std::size_t target_mask, std::size_t ctrl_mask,
                        std::size_t ctrl_value, const CMatrix& m) {
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & target_mask) || (i & ctrl_mask) != ctrl_value) continue;
    const std::size_t j = i | target_mask;
    const Complex a0 = amps[i], a1 = amps[j];
    amps[i] = m00 * a0 + m01 * a1;
    amps[j] = m10 * a0 + m11 * a1;
  }
}

inline void apply_cnot(std::span<Complex> amps, std::size_t target_mask, std::size_t ctrl_mask) {
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (!(i & target_mask) && (i & ctrl_mask)) std::swap(amps[i], amps[i | target_mask]);
}

}  // namespace detail

/// In-place gate action on a 2^n amplitude vector. No validation.
inline void apply_gate_unchecked(std::span<Complex> amps, std::size_t nqubits, const Gate& gate) {
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SingleGate>) {
          detail::apply_block(amps, qubit_mask(g.target, nqubits), 0, 0, g.matrix);
        } else if constexpr (std::is_same_v<T, CnotGate>) {
          detail::apply_cnot(amps, qubit_mask(g.target, nqubits), qubit_mask(g.control, nqubits));
        } else {
          std::size_t mask = 0, value = 0;
          for (const auto& c : g.controls) {
            const std::size_t m = qubit_mask(c.qubit, nqubits);
            mask |= m;
            if (c.polarity) value |= m;
          }
          detail::apply_block(amps, qubit_mask(g.target, nqubits), mask, value, g.matrix);
        }
      },
      gate);
}

/// Dense 2^n x 2^n matrix of the whole circuit (last gate leftmost).
inline CMatrix circuit_unitary(const Circuit& circ) {
  if (circ.qubits == 0 || circ.qubits > kMaxDenseQubits)
    throw DimensionError("circuit_unitary: supports 1.." + std::to_string(kMaxDenseQubits) +
                         " qubits");
  validate_circuit(circ);
  const std::size_t dim = std::size_t{1} << circ.qubits;
  CMatrix out(dim, dim);
  std::vector<Complex> column(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(column.begin(), column.end(), Complex{});
    column[c] = 1.0;
    for (const auto& g : circ.gates) apply_gate_unchecked(column, circ.qubits, g);
    for (std::size_t r = 0; r < dim; ++r) out(r, c) = column[r];
  }
  return out;
}

struct GateCounts {
  std::size_t single = 0;
  std::size_t cnot = 0;
  std::size_t mcu = 0;
  std::size_t max_controls = 0;  // cnot counts as one control
  std::size_t total() const { return single + cnot + mcu; }
};

inline GateCounts count_gates(const Circuit& circ) {
  GateCounts n;
  for (const auto& gate : circ.gates) {
    if (std::holds_alternative<SingleGate>(gate)) {
      ++n.single;
    } else if (std::holds_alternative<CnotGate>(gate)) {
      ++n.cnot;
      n.max_controls = std::max<std::size_t>(n.max_controls, 1);
    } else {
      ++n.mcu;
      n.max_controls = std::max(n.max_controls, std::get<McuGate>(gate).controls.size());
    }
  }
  return n;
}

}  // namespace povmforge

#endif  // POVMFORGE_CIRCUIT_HPP

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

// JSON and text encodings of the library's artifacts. Field order is fixed
// (ordered_json). Reports round numbers to 12 significant digits; circuits
// keep full precision so they can be loaded back exactly.

#ifndef POVMFORGE_SERIALIZE_HPP
#define POVMFORGE_SERIALIZE_HPP

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "povmforge/circuit.hpp"
#include "povmforge/decompose.hpp"
#include "povmforge/dilation.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/sim.hpp"

namespace povmforge {

using Json = nlohmann::ordered_json;

/// x rounded to 12 significant digits.
inline double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline Json complex_to_json(Complex z, bool rounded) {
  return rounded ? Json::array({round12(z.real()), round12(z.imag())})
                 : Json::array({z.real(), z.imag()});
}

inline Json matrix_to_json(const CMatrix& m, bool rounded = true) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c), rounded));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error("matrix JSON: expected a non-empty array of rows");
  CMatrix m(j.size(), j.front().size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (j[r].size() != m.cols()) throw Error("matrix JSON: ragged rows");
    for (std::size_t c = 0; c < m.cols(); ++c)
      m(r, c) = Complex{j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>()};
  }
  return m;
}

// ---------------------------------------------------------------------------

inline Json to_json(const PovmSet& povm) {
  const auto& p = povm.params;
  Json params = {{"alpha", round12(p.alpha)},
                 {"beta", round12(p.beta)},
                 {"gamma", round12(p.gamma)},
                 {"delta", round12(p.delta)},
                 {"q", round12(p.q)}};
  Json elements = Json::array();
  for (const auto& e : povm.elements) elements.push_back(matrix_to_json(e));
  return {{"params", std::move(params)}, {"elements", std::move(elements)}};
}

inline Json to_json(const AuditReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"residual", round12(c.residual)}, {"pass", c.pass}});
  Json notes = Json::array();
  for (const auto& n : report.notes) notes.push_back(n);
  return {{"checks", std::move(checks)}, {"notes", std::move(notes)}};
}

inline AuditReport audit_report_from_json(const Json& j) {
  AuditReport r;
  for (const auto& c : j.at("checks"))
    r.checks.push_back(
        {c.at("name").get<std::string>(), c.at("residual").get<double>(), c.at("pass").get<bool>()});
  for (const auto& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
  return r;
}

inline Json to_json(const TwoLevelSeq& seq) {
  Json ops = Json::array();
  for (const auto& op : seq.ops)
    ops.push_back({{"i", op.i}, {"j", op.j}, {"block", matrix_to_json(op.block, false)}});
  return {{"dim", seq.dim}, {"convention", std::string(TwoLevelSeq::convention)},
          {"ops", std::move(ops)}};
}

inline TwoLevelSeq two_level_seq_from_json(const Json& j) {
  if (j.at("convention").get<std::string>() != TwoLevelSeq::convention)
    throw Error("two-level JSON: unsupported convention");
  TwoLevelSeq seq{j.at("dim").get<std::size_t>(), {}};
  for (const auto& op : j.at("ops")) {
    TwoLevelOp o{op.at("i").get<std::size_t>(), op.at("j").get<std::size_t>(),
                 matrix_from_json(op.at("block"))};
    check_op(o, seq.dim);
    seq.ops.push_back(std::move(o));
  }
  return seq;
}

inline Json to_json(const Histogram& h) {
  Json expected = Json::array();
  for (double p : h.expected) expected.push_back(round12(p));
  return {{"shots", h.shots}, {"seed", h.seed}, {"counts", h.counts}, {"expected", expected}};
}

// ---------------------------------------------------------------------------
// Circuits

inline Json to_json(const Circuit& circ) {
  Json gates = Json::array();
  for (const auto& gate : circ.gates) {
    if (const auto* g = std::get_if<SingleGate>(&gate)) {
      gates.push_back({{"kind", "single"}, {"target", g->target},
                       {"matrix", matrix_to_json(g->matrix, false)}});
    } else if (const auto* g = std::get_if<CnotGate>(&gate)) {
      gates.push_back({{"kind", "cnot"}, {"control", g->control}, {"target", g->target}});
    } else {
      const auto& m = std::get<McuGate>(gate);
      Json controls = Json::array();
      for (const auto& c : m.controls)
        controls.push_back({{"qubit", c.qubit}, {"polarity", c.polarity ? 1 : 0}});
      gates.push_back({{"kind", "mcu"}, {"controls", std::move(controls)}, {"target", m.target},
                       {"matrix", matrix_to_json(m.matrix, false)}});
    }
  }
  return {{"version", 1}, {"qubits", circ.qubits}, {"convention", "msb-first"},
          {"gates", std::move(gates)}};
}

inline Circuit circuit_from_json(const Json& j) {
  if (j.at("version").get<int>() != 1) throw Error("circuit JSON: unsupported version");
  if (j.at("convention").get<std::string>() != "msb-first")
    throw Error("circuit JSON: unsupported convention");
  Circuit circ{j.at("qubits").get<std::size_t>(), {}};
  for (const auto& g : j.at("gates")) {
    const auto kind = g.at("kind").get<std::string>();
    if (kind == "single") {
      circ.gates.push_back(
          SingleGate{g.at("target").get<std::size_t>(), matrix_from_json(g.at("matrix"))});
    } else if (kind == "cnot") {
      circ.gates.push_back(
          CnotGate{g.at("control").get<std::size_t>(), g.at("target").get<std::size_t>()});
    } else if (kind == "mcu") {
      McuGate m;
      for (const auto& c : g.at("controls"))
        m.controls.push_back({c.at("qubit").get<std::size_t>(), c.at("polarity").get<int>() != 0});
      m.target = g.at("target").get<std::size_t>();
      m.matrix = matrix_from_json(g.at("matrix"));
      circ.gates.push_back(std::move(m));
    } else {
      throw Error("circuit JSON: unknown gate kind '" + kind + "'");
    }
  }
  validate_circuit(circ);
  return circ;
}

/// Line-oriented export of a lowered circuit:
///   qubits N
///   u(t) m00r m00i m01r m01i m10r m10i m11r m11i
///   cx c t
inline std::string to_qasm_like(const Circuit& circ) {
  std::ostringstream out;
  out << "qubits " << circ.qubits << "\n";
  char buf[64];
  for (const auto& gate : circ.gates) {
    if (const auto* g = std::get_if<SingleGate>(&gate)) {
      out << "u(" << g->target << ")";
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
          std::snprintf(buf, sizeof buf, " %.17g %.17g", g->matrix(r, c).real(),
                        g->matrix(r, c).imag());
          out << buf;
        }
      out << "\n";
    } else if (const auto* g = std::get_if<CnotGate>(&gate)) {
      out << "cx " << g->control << " " << g->target << "\n";
    } else {
      throw Error("qasm-like export: lower multi-controlled gates first");
    }
  }
  return out.str();
}

inline Circuit circuit_from_qasm_like(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  Circuit circ;
  if (!(in >> word) || word != "qubits" || !(in >> circ.qubits))
    throw Error("qasm-like: missing 'qubits N' header");
  while (in >> word) {
    if (word == "cx") {
      CnotGate g;
      if (!(in >> g.control >> g.target)) throw Error("qasm-like: malformed cx");
      circ.gates.push_back(g);
    } else if (word.starts_with("u(") && word.ends_with(")")) {
      SingleGate g;
      g.target = std::stoul(word.substr(2, word.size() - 3));
      g.matrix = CMatrix(2, 2);
      for (std::size_t k = 0; k < 4; ++k) {
        double re = 0, im = 0;
        if (!(in >> re >> im)) throw Error("qasm-like: malformed u");
        g.matrix(k / 2, k % 2) = Complex{re, im};
      }
      circ.gates.push_back(std::move(g));
    } else {
      throw Error("qasm-like: unknown instruction '" + word + "'");
    }
  }
  validate_circuit(circ);
  return circ;
}

}  // namespace povmforge

#endif  // POVMFORGE_SERIALIZE_HPP

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

// 32x32 dilation unitaries realising the POVM on two system qubits plus three
// ancillas:
//
//   U |psi>|000> = sum_k sqrt(P_k)|psi> (x) |anc_k>,
//   anc_1..anc_5 = 000, 001, 010, 011, 100.
//
// Basis index of |s1 s2>|a1 a2 a3> is 16 s1 + 8 s2 + 4 a1 + 2 a2 + a3, i.e.
// system qubits are most significant. Only the four columns with ancilla 000
// are constrained; the other 28 are any orthonormal completion.

#ifndef POVMFORGE_DILATION_HPP
#define POVMFORGE_DILATION_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "povmforge/errors.hpp"
#include "povmforge/matkernel.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/tag_expr.hpp"

namespace povmforge {

inline constexpr std::size_t kAncillaDim = 8;
inline constexpr std::size_t kDilationDim = kSystemDim * kAncillaDim;

/// Ancilla register value that flags outcome k (0-based): 000, 001, 010, 011, 100.
constexpr std::size_t ancilla_for_outcome(std::size_t k) { return k; }

constexpr std::size_t global_index(std::size_t system, std::size_t ancilla) {
  return system * kAncillaDim + ancilla;
}

/// Global indices of |j>|000>, j = 0..3.
inline constexpr std::array<std::size_t, 4> kConstrainedColumns{0, 8, 16, 24};

enum class DilationSource { oracle, paper_matrix, paper_product };

inline std::string_view to_string(DilationSource s) {
  switch (s) {
    case DilationSource::oracle: return "oracle";
    case DilationSource::paper_matrix: return "paper-matrix";
    case DilationSource::paper_product: return "paper-product";
  }
  return "unknown";
}

struct DilationUnitary {
  CMatrix matrix;
  DilationSource source = DilationSource::oracle;
  PovmParams params;
};

/// Hermitian PSD square root; eigenvalues in [-tol, 0) are clamped to 0.
/// Eigenvalues within rounding noise of zero (64 ulp of the spectral radius)
/// are also zeroed: sqrt would blow 1e-17 noise up to 3e-9.
inline CMatrix sqrt_povm_element(const CMatrix& p, double tol = kDefaultTolerance) {
  const HermitianEigen eig = eig_hermitian(p, tol);
  const std::size_t n = p.rows();
  double radius = 0.0;
  for (double lambda : eig.eigenvalues) radius = std::max(radius, std::abs(lambda));
  const double dust = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, radius);
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.eigenvalues[k];
    if (lambda < -tol)
      throw StructureError("sqrt_povm_element: eigenvalue " + std::to_string(lambda) +
                           " makes the input indefinite");
    const double root = lambda <= dust ? 0.0 : std::sqrt(lambda);
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += root * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return out;
}

/// sum_k (sqrt(P_k) |psi>) (x) |anc_k>: the right-hand side of the dilation contract.
inline CVector dilated_image(const std::array<CMatrix, kNumOutcomes>& sqrt_elements,
                             const CVector& psi) {
  if (psi.dim() != kSystemDim) throw DimensionError("dilated_image: need a 2-qubit state");
  CVector out(kDilationDim);
  for (std::size_t k = 0; k < kNumOutcomes; ++k) {
    const CVector part = multiply(sqrt_elements[k], psi);
    for (std::size_t s = 0; s < kSystemDim; ++s)
      out[global_index(s, ancilla_for_outcome(k))] += part[s];
  }
  return out;
}

inline std::array<CMatrix, kNumOutcomes> sqrt_elements(const PovmSet& povm) {
  std::array<CMatrix, kNumOutcomes> out;
  for (std::size_t k = 0; k < kNumOutcomes; ++k) out[k] = sqrt_povm_element(povm.elements[k]);
  return out;
}

/// 32x4 matrix whose column j is U|j>|000>.
inline CMatrix constrained_columns(const PovmParams& params) {
  const auto roots = sqrt_elements(build_povm(params));
  CMatrix out(kDilationDim, kSystemDim);
  for (std::size_t j = 0; j < kSystemDim; ++j)
    out.set_column(j, dilated_image(roots, CVector::basis(kSystemDim, j)));
  return out;
}

/// Places the constrained columns at |j>|000> and fills the other 28 columns,
/// in ascending index order, from complete_columns.
inline DilationUnitary build_oracle_dilation(const PovmParams& params) {
  const CMatrix fixed = constrained_columns(params);
  const CMatrix completed = complete_columns(fixed);
  DilationUnitary out{CMatrix(kDilationDim, kDilationDim), DilationSource::oracle, params};
  std::size_t next = kSystemDim;
  for (std::size_t c = 0; c < kDilationDim; ++c) {
    if (c % kAncillaDim == 0) {
      out.matrix.set_column(c, fixed.column(c / kAncillaDim));
    } else {
      out.matrix.set_column(c, completed.column(next++));
    }
  }
  if (unitarity_defect(out.matrix) > kDefaultTolerance)
    throw StructureError("build_oracle_dilation: completion is not unitary");
  return out;
}

// ---------------------------------------------------------------------------
// Printed 32x32 matrix, stored as tags.
//
// The printed layout is an 8x8 grid of blocks: 5x5 blocks (ancilla 000..100)
// for every pair of output/input system states, interleaved with 3x3 identity
// blocks on the ancilla 101..111 diagonal. kPaperBlocks[R][C] is the 5x5 block
// with rows = output system R, columns = input system C, row-major.

namespace detail {

using Block5 = std::array<std::string_view, 25>;

// clang-format off
inline constexpr std::array<std::array<Block5, 4>, 4> kPaperBlocks{{
  {{  // output |00>
    Block5{"q/aa", "a/2y",  "a/2s",  "-a/2y", "u/2a",
           "q/aa", "a/2y",  "-a/2s", "a/2y",  "u/2a",
           "q/aa", "-a/2y", "a/2s",  "a/2y",  "u/2a",
           "q/aa", "-a/2y", "-a/2s", "-a/2y", "u/2a",
           "u",    "0",     "0",     "0",     "2q/-a"},
    Block5{"q/ab",  "bt/2gds", "0", "-bt/2gds", "v/2a",
           "q/ab",  "bt/2gds", "0", "bt/2gds",  "v/2a",
           "-q/ab", "bt/2gds", "0", "-bt/2gds", "-v/2a",
           "-q/ab", "bt/2gds", "0", "bt/2gds",  "-v/2a",
           "0",     "0",       "0", "0",        "0"},
    Block5{"q/ag",  "dz/2bgy",  "0", "-dz/2bgy", "0",
           "-q/ag", "-dz/2bgy", "0", "-dz/2bgy", "0",
           "q/ag",  "-dz/2bgy", "0", "dz/2bgy",  "0",
           "-q/ag", "dz/2bgy",  "0", "dz/2bgy",  "0",
           "0",     "0",        "0", "0",        "0"},
    Block5{"q/ad",  "w/2a",  "0", "a/2s", "p/2a",
           "-q/ad", "-w/2a", "0", "a/2s", "-p/2a",
           "-q/ad", "w/2a",  "0", "a/2s", "-p/2a",
           "q/ad",  "-w/2a", "0", "a/2s", "p/2a",
           "0",     "0",     "0", "0",    "0"},
  }},
  {{  // output |01>
    Block5{"q/ab",  "0", "-b/2s", "0", "u/2b",
           "q/ab",  "0", "b/2s",  "0", "u/2b",
           "-q/ab", "0", "b/2s",  "0", "-u/2b",
           "-q/ab", "0", "-b/2s", "0", "-u/2b",
           "0",     "0", "0",     "0", "0"},
    Block5{"q/bb", "at/2gds",  "b/2z",  "-at/2gds", "v/2b",
           "q/bb", "at/2gds",  "-b/2z", "at/2gds",  "v/2b",
           "q/bb", "-at/2gds", "b/2z",  "at/2gds",  "v/2b",
           "q/bb", "-at/2gds", "-b/2z", "-at/2gds", "v/2b",
           "v",    "0",        "0",     "0",        "2q/-b"},
    Block5{"q/bg",  "-gy/2adz", "0", "gy/2adz", "0",
           "-q/bg", "gy/2adz",  "0", "gy/2adz", "0",
           "-q/bg", "-gy/2adz", "0", "gy/2adz", "0",
           "q/bg",  "gy/2adz",  "0", "gy/2adz", "0",
           "0",     "0",        "0", "0",       "0"},
    Block5{"q/bd",  "w/2b",  "b/2z", "-b/2s", "p/2b",
           "-q/bd", "-w/2b", "b/2z", "-b/2s", "-p/2b",
           "q/bd",  "-w/2b", "b/2z", "b/2s",  "p/2b",
           "-q/bd", "w/2b",  "b/2z", "b/2s",  "-p/2b",
           "0",     "0",     "0",    "0",     "0"},
  }},
  {{  // output |10>
    Block5{"q/ag",  "0", "0", "0", "u/2g",
           "-q/ag", "0", "0", "0", "-u/2g",
           "q/ag",  "0", "0", "0", "u/2g",
           "-q/ag", "0", "0", "0", "-u/2g",
           "0",     "0", "0", "0", "0"},
    Block5{"q/bg",  "-ds/2abt", "-g/2z", "ds/2abt", "v/2g",
           "-q/bg", "ds/2abt",  "-g/2z", "ds/2abt", "-v/2g",
           "-q/bg", "-ds/2abt", "g/2z",  "ds/2abt", "-v/2g",
           "q/bg",  "ds/2abt",  "g/2z",  "ds/2abt", "v/2g",
           "0",     "0",        "0",     "0",       "0"},
    Block5{"q/gg", "-by/2adz", "g/2t",  "by/2adz",  "g/2t",
           "q/gg", "-by/2adz", "-g/2t", "-by/2adz", "g/2t",
           "q/gg", "by/2adz",  "g/2t",  "-by/2adz", "g/2t",
           "q/gg", "by/2adz",  "-g/2t", "by/2adz",  "g/2t",
           "w",    "0",        "0",     "0",        "0"},
    Block5{"q/gd",  "w/2g",  "-g/2z", "0", "p/2g",
           "q/gd",  "w/2g",  "g/2z",  "0", "p/2g",
           "-q/gd", "w/2g",  "g/2z",  "0", "-p/2g",
           "-q/gd", "w/2g",  "-g/2z", "0", "-p/2g",
           "0",     "2q/-g", "0",     "0", "0"},
  }},
  {{  // output |11>
    Block5{"q/ad",  "-d/2y", "0", "d/2y", "u/2d",
           "-q/ad", "d/2y",  "0", "d/2y", "-u/2d",
           "-q/ad", "-d/2y", "0", "d/2y", "-u/2d",
           "q/ad",  "d/2y",  "0", "d/2y", "u/2d",
           "0",     "0",     "0", "0",    "0"},
    Block5{"q/bd",  "-gs/2abt", "0", "gs/2abt",  "v/2d",
           "-q/bd", "gs/2abt",  "0", "gs/2abt",  "-v/2d",
           "q/bd",  "gs/2abt",  "0", "-gs/2abt", "v/2d",
           "-q/bd", "-gs/2abt", "0", "-gs/2abt", "-v/2d",
           "0",     "0",        "0", "0",        "0"},
    Block5{"q/gd",  "az/2bgy", "-d/2t", "-az/2bgy", "-d/2t",
           "q/gd",  "az/2bgy", "d/2t",  "az/2bgy",  "-d/2t",
           "-q/gd", "az/2bgy", "d/2t",  "-az/2bgy", "d/2t",
           "-q/gd", "az/2bgy", "-d/2t", "az/2bgy",  "d/2t",
           "0",     "0",       "0",     "0",        "0"},
    Block5{"q/dd", "w/2d",  "0", "0", "p/2d",
           "q/dd", "w/2d",  "0", "0", "p/2d",
           "q/dd", "-w/2d", "0", "0", "p/2d",
           "q/dd", "-w/2d", "0", "0", "p/2d",
           "p",    "0",     "0", "0", "2q/-d"},
  }},
}};
// clang-format on

}  // namespace detail

/// Tag of entry (row, col), 0-based global indices, of the printed matrix.
inline std::string_view paper_matrix_tag(std::size_t row, std::size_t col) {
  if (row >= kDilationDim || col >= kDilationDim) throw DimensionError("paper_matrix_tag: index");
  const std::size_t rs = row / kAncillaDim, ra = row % kAncillaDim;
  const std::size_t cs = col / kAncillaDim, ca = col % kAncillaDim;
  if (ra < kNumOutcomes && ca < kNumOutcomes) return detail::kPaperBlocks[rs][cs][ra * 5 + ca];
  // I_3 blocks on the diagonal; everything else in the grid is blank.
  return row == col ? "1" : "0";
}

/// Entry-by-entry evaluation of the printed matrix. No unitarity is enforced.
inline DilationUnitary transcribe_paper_matrix(const PovmParams& params) {
  DilationUnitary out{CMatrix(kDilationDim, kDilationDim), DilationSource::paper_matrix, params};
  for (std::size_t r = 0; r < kDilationDim; ++r)
    for (std::size_t c = 0; c < kDilationDim; ++c)
      out.matrix(r, c) = evaluate_tag(paper_matrix_tag(r, c), params);
  return out;
}

// ---------------------------------------------------------------------------
// Audit

struct AuditCheck {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  std::vector<std::string> notes;

  /// Checks whose name starts with "advisory:" never fail the report.
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass && !c.name.starts_with("advisory:")) return false;
    return true;
  }
};

struct EntryDeviation {
  std::size_t row = 0, col = 0;  // 0-based
  std::string tag;
  double value = 0.0;
  double expected = 0.0;
};

/// Entries of the printed matrix inside the constrained columns that differ
/// from the values the dilation contract forces, largest first.
inline std::vector<EntryDeviation> paper_matrix_entry_deviations(const PovmParams& params,
                                                                 double tol = kDefaultTolerance) {
  const DilationUnitary paper = transcribe_paper_matrix(params);
  const CMatrix want = constrained_columns(params);
  std::vector<EntryDeviation> out;
  for (std::size_t j = 0; j < kSystemDim; ++j) {
    const std::size_t c = kConstrainedColumns[j];
    for (std::size_t r = 0; r < kDilationDim; ++r) {
      const double got = paper.matrix(r, c).real();
      const double exp = want(r, j).real();
      if (std::abs(got - exp) > tol)
        out.push_back({r, c, std::string(paper_matrix_tag(r, c)), got, exp});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::abs(a.value - a.expected) > std::abs(b.value - b.expected);
  });
  return out;
}

namespace detail {

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string basis_label(std::size_t index) {
  std::string s = "|";
  const std::size_t sys = index / kAncillaDim, anc = index % kAncillaDim;
  s += static_cast<char>('0' + ((sys >> 1) & 1));
  s += static_cast<char>('0' + (sys & 1));
  s += ">|";
  for (int b = 2; b >= 0; --b) s += static_cast<char>('0' + ((anc >> b) & 1));
  s += ">";
  return s;
}

/// 100 seeded random normalized two-qubit states used by the contract check.
inline std::vector<CVector> audit_states(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<CVector> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    CVector v(kSystemDim);
    for (auto& x : v.entries()) x = Complex{gauss(rng), gauss(rng)};
    out.push_back(normalized(v));
  }
  return out;
}

}  // namespace detail

inline constexpr std::uint64_t kAuditSeed = 0x5eedULL;
inline constexpr std::size_t kAuditStates = 100;

/// Cross-checks a candidate dilation against the contract and a reference.
/// Full-matrix agreement with the reference is advisory only: completions of
/// the 28 unconstrained columns are not unique.
inline AuditReport audit_dilation(const DilationUnitary& candidate,
                                  const DilationUnitary& reference, const PovmSet& povm,
                                  double tol = kDefaultTolerance) {
  if (!(candidate.params == reference.params) || !(candidate.params == povm.params))
    throw Error("audit_dilation: parameter sets differ");
  const CMatrix& u = candidate.matrix;
  if (u.rows() != kDilationDim || u.cols() != kDilationDim)
    throw DimensionError("audit_dilation: candidate must be 32x32");

  AuditReport report;
  auto add = [&](std::string name, double residual) {
    report.checks.push_back({std::move(name), residual, residual <= tol});
  };

  add("unitarity_defect", unitarity_defect(u));

  const CMatrix want = constrained_columns(candidate.params);
  double col_dev = 0.0, ref_dev = 0.0;
  for (std::size_t j = 0; j < kSystemDim; ++j) {
    const std::size_t c = kConstrainedColumns[j];
    for (std::size_t r = 0; r < kDilationDim; ++r) {
      col_dev = std::max(col_dev, std::abs(u(r, c) - want(r, j)));
      ref_dev = std::max(ref_dev, std::abs(u(r, c) - reference.matrix(r, c)));
    }
  }
  add("constrained_columns_max_deviation", col_dev);

  const auto roots = sqrt_elements(povm);
  double contract = 0.0;
  for (const auto& psi : detail::audit_states(kAuditSeed, kAuditStates)) {
    const CVector lhs = multiply(u, kron(psi, CVector::basis(kAncillaDim, 0)));
    contract = std::max(contract, norm(lhs - dilated_image(roots, psi)));
  }
  add("dilation_contract_residual", contract);
  add("constrained_columns_vs_reference", ref_dev);
  add("advisory:full_matrix_vs_reference", max_abs(u - reference.matrix));

  report.notes.push_back("source=" + std::string(to_string(candidate.source)) +
                         " reference=" + std::string(to_string(reference.source)) +
                         " tolerance=" + detail::format_number(tol));
  report.notes.push_back("contract residual is the max over " + std::to_string(kAuditStates) +
                         " seeded random |psi>");

  // Column norms and orthogonality pinpoint where a non-unitary candidate breaks.
  const CMatrix gram = multiply(adjoint(u), u);
  for (std::size_t c = 0; c < kDilationDim; ++c) {
    const double defect = std::abs(gram(c, c) - 1.0);
    if (defect > tol)
      report.notes.push_back("column " + std::to_string(c + 1) + " " + detail::basis_label(c) +
                             " squared norm " + detail::format_number(gram(c, c).real()));
  }
  std::size_t skew_pairs = 0;
  for (std::size_t a = 0; a < kDilationDim; ++a)
    for (std::size_t b = a + 1; b < kDilationDim; ++b)
      if (std::abs(gram(a, b)) > tol) ++skew_pairs;
  if (skew_pairs > 0)
    report.notes.push_back(std::to_string(skew_pairs) + " column pairs are not orthogonal");

  if (candidate.source == DilationSource::paper_matrix) {
    const auto devs = paper_matrix_entry_deviations(candidate.params, tol);
    report.notes.push_back(std::to_string(devs.size()) +
                           " constrained-column entries deviate from the contract");
    for (const auto& d : devs)
      report.notes.push_back("entry (" + std::to_string(d.row + 1) + "," +
                             std::to_string(d.col + 1) + ") tag '" + d.tag + "' = " +
                             detail::format_number(d.value) + ", contract requires " +
                             detail::format_number(d.expected));
    // Tag table of every nonblank constrained-column entry, 1-based.
    for (std::size_t j = 0; j < kSystemDim; ++j) {
      const std::size_t c = kConstrainedColumns[j];
      for (std::size_t r = 0; r < kDilationDim; ++r) {
        const std::string_view tag = paper_matrix_tag(r, c);
        if (tag == "0") continue;
        report.notes.push_back("tag (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                               ") '" + std::string(tag) + "' = " +
                               detail::format_number(u(r, c).real()) + " deviation " +
                               detail::format_number(std::abs(u(r, c) - want(r, j))));
      }
    }
  }
  return report;
}

}  // namespace povmforge

#endif  // POVMFORGE_DILATION_HPP

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

#ifndef POVMFORGE_DECOMPOSE_HPP
#define POVMFORGE_DECOMPOSE_HPP

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "povmforge/errors.hpp"
#include "povmforge/matkernel.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/tag_expr.hpp"

namespace povmforge {

/// A unitary acting only on the plane spanned by basis states i < j.
/// block = [[a, b], [c, d]] sits at (i,i), (i,j), (j,i), (j,j).
struct TwoLevelOp {
  std::size_t i = 0;
  std::size_t j = 0;
  CMatrix block = CMatrix::identity(2);
};

/// Ordered factors; the represented matrix is ops[0] * ops[1] * ... * ops[n-1].
struct TwoLevelSeq {
  std::size_t dim = 0;
  std::vector<TwoLevelOp> ops;
  static constexpr std::string_view convention = "left-first";
};

inline void check_op(const TwoLevelOp& op, std::size_t dim) {
  if (!(op.i < op.j && op.j < dim))
    throw DimensionError("two-level op (" + std::to_string(op.i) + "," + std::to_string(op.j) +
                         ") invalid for dimension " + std::to_string(dim));
  if (op.block.rows() != 2 || op.block.cols() != 2)
    throw DimensionError("two-level op block must be 2x2");
}

inline CMatrix embed(const TwoLevelOp& op, std::size_t dim) {
  check_op(op, dim);
  CMatrix out = CMatrix::identity(dim);
  out(op.i, op.i) = op.block(0, 0);
  out(op.i, op.j) = op.block(0, 1);
  out(op.j, op.i) = op.block(1, 0);
  out(op.j, op.j) = op.block(1, 1);
  return out;
}

/// m <- m * embed(op), touching only columns i and j.
inline void right_apply(CMatrix& m, const TwoLevelOp& op) {
  const auto& g = op.block;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Complex xi = m(r, op.i), xj = m(r, op.j);
    m(r, op.i) = xi * g(0, 0) + xj * g(1, 0);
    m(r, op.j) = xi * g(0, 1) + xj * g(1, 1);
  }
}

/// m <- embed(op) * m, touching only rows i and j.
inline void left_apply(CMatrix& m, const TwoLevelOp& op) {
  const auto& g = op.block;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const Complex xi = m(op.i, c), xj = m(op.j, c);
    m(op.i, c) = g(0, 0) * xi + g(0, 1) * xj;
    m(op.j, c) = g(1, 0) * xi + g(1, 1) * xj;
  }
}

inline CMatrix reconstruct(const TwoLevelSeq& seq) {
  CMatrix out = CMatrix::identity(seq.dim);
  for (const auto& op : seq.ops) {
    check_op(op, seq.dim);
    right_apply(out, op);
  }
  return out;
}

/// Same factors, opposite product order.
inline TwoLevelSeq reversed(TwoLevelSeq seq) {
  std::reverse(seq.ops.begin(), seq.ops.end());
  return seq;
}

/// Column-by-column Givens elimination. For each column c (left to right) the
/// entries below the diagonal are zeroed bottom-up by rotations G on the
/// plane (c, r); the rotation on (c, c+1) also makes the diagonal entry 1, and
/// the final diagonal phase is folded into the last rotation. Then
/// G_n ... G_1 U = I, so U = G_1^dagger ... G_n^dagger.
inline TwoLevelSeq two_level_decompose(const CMatrix& u, double tol = kDefaultTolerance) {
  if (!u.square()) throw DimensionError("two_level_decompose: matrix must be square");
  if (unitarity_defect(u) > tol) throw StructureError("two_level_decompose: input is not unitary");
  constexpr double kZero = 1e-14;

  const std::size_t d = u.rows();
  TwoLevelSeq seq{d, {}};
  CMatrix a = u;
  auto is_identity = [](const CMatrix& g) {
    return std::abs(g(0, 0) - 1.0) <= kZero && std::abs(g(1, 1) - 1.0) <= kZero &&
           std::abs(g(0, 1)) <= kZero && std::abs(g(1, 0)) <= kZero;
  };
  auto emit = [&](std::size_t i, std::size_t j, const CMatrix& g) {
    if (!is_identity(g)) seq.ops.push_back({i, j, adjoint(g)});
  };

  for (std::size_t c = 0; c + 1 < d; ++c) {
    for (std::size_t r = d - 1; r > c; --r) {
      const Complex x = a(c, c), y = a(r, c);
      const bool last = r == c + 1;
      if (!last && std::abs(y) <= kZero) continue;
      const double n = std::sqrt(std::norm(x) + std::norm(y));
      CMatrix g = {{std::conj(x) / n, std::conj(y) / n}, {-y / n, x / n}};
      left_apply(a, {c, r, g});
      if (last && c + 2 == d) {
        // Fold the remaining phase on the final diagonal entry into g.
        const Complex phase = a(d - 1, d - 1) / std::abs(a(d - 1, d - 1));
        const Complex fix = std::conj(phase);
        g(1, 0) *= fix;
        g(1, 1) *= fix;
        for (std::size_t k = 0; k < d; ++k) a(d - 1, k) *= fix;
      }
      emit(c, r, g);
    }
  }
  if (d == 1 && std::abs(a(0, 0) - 1.0) > kZero)
    throw DimensionError("two_level_decompose: 1x1 phase has no two-level form");
  return seq;
}

// ---------------------------------------------------------------------------
// Printed factorization: U = M * (19 factors), M = (24 factors).

struct PaperFactor {
  std::size_t i1 = 0, j1 = 0;  // 1-based, as printed
  std::array<std::string_view, 4> tags;  // [[a, b], [c, d]]
};

namespace detail {

// clang-format off
inline constexpr std::array<PaperFactor, 6> kMGroup{{
  {1, 2, {"1/r2",  "1/r2",  "1/r2",  "-1/r2"}},
  {1, 3, {"r2/r3", "1/r3",  "1/r3",  "-r2/r3"}},
  {1, 4, {"r3/2",  "1/2",   "1/2",   "-r3/2"}},
  {2, 4, {"0",     "1",     "1",     "0"}},
  {2, 3, {"1/r3",  "r2/r3", "r2/r3", "-1/r3"}},
  {3, 4, {"1/r2",  "1/r2",  "1/r2",  "-1/r2"}},
}};

inline constexpr std::array<PaperFactor, 19> kOuterFactors{{
  {1, 10,  {"a/s",   "-b/s",  "-b/s",  "-a/s"}},
  {2, 27,  {"a/y",   "-d/y",  "-d/y",  "-a/y"}},
  {3, 12,  {"a/s",   "b/s",   "b/s",   "-a/s"}},
  {4, 25,  {"a/y",   "d/y",   "d/y",   "-a/y"}},
  {9, 20,  {"b/z",   "g/z",   "g/z",   "-b/z"}},
  {11, 18, {"b/z",   "-g/z",  "-g/z",  "-b/z"}},
  {17, 26, {"g/t",   "-d/t",  "-d/t",  "-g/t"}},
  {19, 28, {"g/t",   "d/t",   "d/t",   "-g/t"}},
  {10, 28, {"-t/gd", "-s/ab", "-s/ab", "t/gd"}},
  {12, 26, {"-t/gd", "-s/ab", "-s/ab", "t/gd"}},
  {18, 25, {"y/ad",  "-z/bg", "-z/bg", "-y/ad"}},
  {20, 27, {"y/ad",  "z/bg",  "z/bg",  "-y/ad"}},
  {5, 28,  {"-2q/a", "u",     "u",     "2q/a"}},
  {13, 27, {"-2q/b", "v",     "v",     "2q/b"}},
  {21, 26, {"w",     "-2q/g", "-2q/g", "-w"}},
  {25, 29, {"2q/d",  "p",     "p",     "-2q/d"}},
  {1, 28,  {"0",     "1",     "1",     "0"}},
  {9, 27,  {"0",     "1",     "1",     "0"}},
  {17, 21, {"0",     "1",     "1",     "0"}},
}};
// clang-format on

}  // namespace detail

/// The 43 printed factors in product order: M's 24 (the same six-factor group
/// shifted to 1-8, 9-16, 17-24, 25-32) followed by the 19 outer factors.
inline std::vector<PaperFactor> paper_factor_table() {
  std::vector<PaperFactor> out;
  out.reserve(43);
  for (std::size_t shift = 0; shift < 32; shift += 8)
    for (auto f : detail::kMGroup) {
      f.i1 += shift;
      f.j1 += shift;
      out.push_back(f);
    }
  out.insert(out.end(), detail::kOuterFactors.begin(), detail::kOuterFactors.end());
  return out;
}

inline CMatrix evaluate_block(const PaperFactor& f, const PovmParams& params) {
  return CMatrix{{evaluate_tag(f.tags[0], params), evaluate_tag(f.tags[1], params)},
                 {evaluate_tag(f.tags[2], params), evaluate_tag(f.tags[3], params)}};
}

inline TwoLevelSeq paper_factorization(const PovmParams& params) {
  TwoLevelSeq seq{32, {}};
  for (const auto& f : paper_factor_table())
    seq.ops.push_back({f.i1 - 1, f.j1 - 1, evaluate_block(f, params)});
  return seq;
}

}  // namespace povmforge

#endif  // POVMFORGE_DECOMPOSE_HPP

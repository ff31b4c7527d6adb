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

// Dense complex matrices and vectors for dimensions up to 64.
//
// Everything here is a pure function on value types. Storage is row-major.
// The Hermitian eigensolver delegates to Eigen; the rest is plain loops.

#ifndef POVMFORGE_MATKERNEL_HPP
#define POVMFORGE_MATKERNEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "povmforge/errors.hpp"

namespace povmforge {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-10;

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : entries_(dim, Complex{0.0, 0.0}) {}
  CVector(std::initializer_list<Complex> values) : entries_(values) {}
  explicit CVector(std::vector<Complex> values) : entries_(std::move(values)) {}

  std::size_t dim() const { return entries_.size(); }
  Complex& operator[](std::size_t i) { return entries_[i]; }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }
  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }

  static CVector basis(std::size_t dim, std::size_t index) {
    CVector v(dim);
    v[index] = 1.0;
    return v;
  }

 private:
  std::vector<Complex> entries_;
};

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}
  /// Row-major nested initializer, e.g. {{1, 0}, {0, 1}}.
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const Complex> values) {
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }

  CVector column(std::size_t c) const {
    CVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  void set_column(std::size_t c, const CVector& v) {
    if (v.dim() != rows_) throw DimensionError("set_column: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

// ---------------------------------------------------------------------------
// Arithmetic

inline CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline CVector multiply(const CMatrix& a, const CVector& x) {
  if (a.cols() != x.dim()) throw DimensionError("multiply: matrix-vector size mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
    out[i] = acc;
  }
  return out;
}

inline CMatrix adjoint(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shape mismatch");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] += b.entries()[i];
  return out;
}

inline CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("sub: shape mismatch");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.entries().size(); ++i) out.entries()[i] -= b.entries()[i];
  return out;
}

inline CMatrix operator*(Complex s, const CMatrix& a) {
  CMatrix out = a;
  for (auto& x : out.entries()) x *= s;
  return out;
}

inline CVector operator+(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("add: length mismatch");
  CVector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] += b[i];
  return out;
}

inline CVector operator-(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("sub: length mismatch");
  CVector out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] -= b[i];
  return out;
}

inline CVector operator*(Complex s, const CVector& a) {
  CVector out = a;
  for (auto& x : out.entries()) x *= s;
  return out;
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: length mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double norm(const CVector& v) {
  double acc = 0.0;
  for (const auto& x : v.entries()) acc += std::norm(x);
  return std::sqrt(acc);
}

inline CVector normalized(const CVector& v) {
  const double n = norm(v);
  if (n == 0.0) throw StructureError("normalized: zero vector");
  return Complex{1.0 / n, 0.0} * v;
}

/// Tensor product; the first factor occupies the most significant index bits.
inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

inline CMatrix outer(const CVector& a, const CVector& b) {
  CMatrix out(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Norms and structural defects

inline double frobenius_norm(const CMatrix& a) {
  double acc = 0.0;
  for (const auto& x : a.entries()) acc += std::norm(x);
  return std::sqrt(acc);
}

inline double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& x : a.entries()) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(const CVector& v) {
  double m = 0.0;
  for (const auto& x : v.entries()) m = std::max(m, std::abs(x));
  return m;
}

/// ||A^dagger A - I||_F.
inline double unitarity_defect(const CMatrix& a) {
  if (!a.square()) throw DimensionError("unitarity_defect: non-square matrix");
  return frobenius_norm(multiply(adjoint(a), a) - CMatrix::identity(a.rows()));
}

/// max |A - A^dagger|.
inline double hermiticity_defect(const CMatrix& a) {
  if (!a.square()) throw DimensionError("hermiticity_defect: non-square matrix");
  return max_abs(a - adjoint(a));
}

/// Unit-modulus phase e^{i phi} minimising ||a - e^{i phi} b||_F.
inline Complex best_phase(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("best_phase: length mismatch");
  Complex overlap{};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(b[i]) * a[i];
  const double mag = std::abs(overlap);
  return mag == 0.0 ? Complex{1.0, 0.0} : overlap / mag;
}

/// max |a - e^{i phi} b| after aligning the global phase of b to a.
inline double phase_aligned_max_deviation(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("phase_aligned_max_deviation: shape mismatch");
  return max_abs(a - best_phase(a.entries(), b.entries()) * b);
}

inline double phase_aligned_max_deviation(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("phase_aligned_max_deviation: length mismatch");
  return max_abs(a - best_phase(a.entries(), b.entries()) * b);
}

// ---------------------------------------------------------------------------
// Decompositions

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns, matching eigenvalues
};

inline HermitianEigen eig_hermitian(const CMatrix& h, double tol = kDefaultTolerance) {
  if (!h.square()) throw DimensionError("eig_hermitian: non-square matrix");
  if (hermiticity_defect(h) > tol) throw StructureError("eig_hermitian: input is not Hermitian");
  const auto n = static_cast<Eigen::Index>(h.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h(i, j);
  // Symmetrize so rounding asymmetry in the input cannot leak in.
  m = (0.5 * (m + m.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw StructureError("eig_hermitian: solver failed");

  HermitianEigen out;
  out.eigenvalues.resize(h.rows());
  out.eigenvectors = CMatrix(h.rows(), h.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()(i);
    for (Eigen::Index j = 0; j < n; ++j) out.eigenvectors(j, i) = solver.eigenvectors()(j, i);
  }
  return out;
}

/// Extends k orthonormal columns to a d x d unitary. The first k columns are
/// copied verbatim; the rest come from Gram-Schmidt on e_0, e_1, ... in
/// ascending order, skipping candidates whose residual norm falls below 1e-8.
inline CMatrix complete_columns(const CMatrix& v, double tol = kDefaultTolerance) {
  const std::size_t d = v.rows();
  const std::size_t k = v.cols();
  if (k > d) throw DimensionError("complete_columns: more columns than rows");
  for (std::size_t a = 0; a < k; ++a) {
    const CVector ca = v.column(a);
    for (std::size_t b = a; b < k; ++b) {
      const Complex g = inner(ca, v.column(b));
      const Complex want = a == b ? Complex{1.0, 0.0} : Complex{};
      if (std::abs(g - want) > tol)
        throw StructureError("complete_columns: input columns are not orthonormal");
    }
  }

  constexpr double kDependent = 1e-8;
  CMatrix out(d, d);
  std::vector<CVector> basis;
  basis.reserve(d);
  for (std::size_t c = 0; c < k; ++c) {
    basis.push_back(v.column(c));
    out.set_column(c, basis.back());
  }
  for (std::size_t e = 0; e < d && basis.size() < d; ++e) {
    CVector cand = CVector::basis(d, e);
    // Two projection passes keep the result orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) cand = cand - inner(b, cand) * b;
    const double n = norm(cand);
    if (n < kDependent) continue;
    basis.push_back(Complex{1.0 / n, 0.0} * cand);
    out.set_column(basis.size() - 1, basis.back());
  }
  if (basis.size() != d) throw StructureError("complete_columns: completion ran out of candidates");
  return out;
}

}  // namespace povmforge

#endif  // POVMFORGE_MATKERNEL_HPP

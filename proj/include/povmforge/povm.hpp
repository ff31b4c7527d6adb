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

// The five-outcome two-qubit POVM
//
//   P_i = q^2 |Psi_i><Psi_i|  (i = 1..4),   P_5 = I - q^2 sum_i |Psi_i><Psi_i|
//
// where |Psi_i> = (1/alpha)|00> +- (1/beta)|01> +- (1/gamma)|10> +- (1/delta)|11>
// with the sign patterns listed in kStateSigns.

#ifndef POVMFORGE_POVM_HPP
#define POVMFORGE_POVM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "povmforge/errors.hpp"
#include "povmforge/matkernel.hpp"

namespace povmforge {

inline constexpr std::size_t kNumOutcomes = 5;
inline constexpr std::size_t kSystemDim = 4;

/// Sign of the |00>,|01>,|10>,|11> coefficient in |Psi_1>..|Psi_4>.
inline constexpr std::array<std::array<int, 4>, 4> kStateSigns{{
    {+1, +1, +1, +1},
    {+1, +1, -1, -1},
    {+1, -1, +1, -1},
    {+1, -1, -1, +1},
}};

struct PovmParams {
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  double q = 0;
  // sqrt(1 - 4q^2/x^2) for x = alpha, beta, gamma, delta.
  double u = 0, v = 0, w = 0, p = 0;
  // Pairwise root sums of squares.
  double s = 0;  // sqrt(alpha^2 + beta^2)
  double y = 0;  // sqrt(alpha^2 + delta^2)
  double z = 0;  // sqrt(beta^2 + gamma^2)
  double t = 0;  // sqrt(gamma^2 + delta^2)

  std::array<double, 4> coefficients() const { return {alpha, beta, gamma, delta}; }
  std::array<double, 4> residuals() const { return {u, v, w, p}; }
  /// Smallest of alpha^2, beta^2, gamma^2, delta^2.
  double mu_squared() const {
    return std::min({alpha * alpha, beta * beta, gamma * gamma, delta * delta});
  }

  friend bool operator==(const PovmParams&, const PovmParams&) = default;
};

namespace detail {

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kBoundaryTol = 1e-12;

inline double reciprocal_square_sum(double a, double b, double c, double d) {
  return 1.0 / (a * a) + 1.0 / (b * b) + 1.0 / (c * c) + 1.0 / (d * d);
}

inline void check_coefficients(double a, double b, double c, double d) {
  for (double x : {a, b, c, d}) {
    if (!std::isfinite(x)) throw RangeError("alpha..delta must be finite");
    if (x == 0.0) throw RangeError("alpha..delta must be nonzero");
  }
  const double sum = reciprocal_square_sum(a, b, c, d);
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    throw NormalizationError(
        "normalization violated: 1/alpha^2 + 1/beta^2 + 1/gamma^2 + 1/delta^2 = " +
        std::to_string(sum) + " (must be 1)");
  }
}

}  // namespace detail

inline PovmParams validate_params(double alpha, double beta, double gamma, double delta,
                                  double q) {
  detail::check_coefficients(alpha, beta, gamma, delta);
  if (!std::isfinite(q) || q <= 0.0) throw RangeError("q must be a positive finite number");

  PovmParams out;
  out.alpha = alpha;
  out.beta = beta;
  out.gamma = gamma;
  out.delta = delta;
  out.q = q;

  // The q-range and positivity constraints are checked independently; the
  // message names every violated one.
  const double inv_q2 = 1.0 / (q * q);
  const bool range_ok =
      inv_q2 >= 1.0 - detail::kBoundaryTol && inv_q2 <= 4.0 + detail::kBoundaryTol;
  const bool positive_ok = 4.0 * q * q <= out.mu_squared() + detail::kBoundaryTol;
  if (!range_ok || !positive_ok) {
    std::string msg;
    if (!range_ok) msg += "q-range violated: 1/q^2 = " + std::to_string(inv_q2) + " not in [1, 4]";
    if (!positive_ok) {
      if (!msg.empty()) msg += "; ";
      msg += "positivity violated: 4q^2 = " + std::to_string(4.0 * q * q) +
             " exceeds mu^2 = " + std::to_string(out.mu_squared()) + " (P5 indefinite)";
    }
    if (!range_ok) throw RangeError(msg);
    throw PositivityError(msg);
  }

  auto residual = [q](double x) { return std::sqrt(std::max(0.0, 1.0 - 4.0 * q * q / (x * x))); };
  out.u = residual(alpha);
  out.v = residual(beta);
  out.w = residual(gamma);
  out.p = residual(delta);
  out.s = std::hypot(alpha, beta);
  out.y = std::hypot(alpha, delta);
  out.z = std::hypot(beta, gamma);
  out.t = std::hypot(gamma, delta);
  return out;
}

/// q maximising the conclusive-outcome probability: q^2 = mu^2 / 4.
inline double optimal_q(double alpha, double beta, double gamma, double delta) {
  detail::check_coefficients(alpha, beta, gamma, delta);
  const double mu2 = std::min({alpha * alpha, beta * beta, gamma * gamma, delta * delta});
  return std::sqrt(mu2) / 2.0;
}

/// |Psi_1>..|Psi_4> in basis order |00>, |01>, |10>, |11>.
inline std::array<CVector, 4> build_states(const PovmParams& params) {
  const auto coeff = params.coefficients();
  std::array<CVector, 4> states;
  for (std::size_t i = 0; i < 4; ++i) {
    states[i] = CVector(kSystemDim);
    for (std::size_t k = 0; k < 4; ++k) states[i][k] = kStateSigns[i][k] / coeff[k];
  }
  return states;
}

struct PovmSet {
  std::array<CMatrix, kNumOutcomes> elements;
  PovmParams params;
};

inline PovmSet build_povm(const PovmParams& params) {
  PovmSet out;
  out.params = params;
  const auto states = build_states(params);
  const Complex q2{params.q * params.q, 0.0};
  CMatrix rest = CMatrix::identity(kSystemDim);
  for (std::size_t i = 0; i < 4; ++i) {
    out.elements[i] = q2 * outer(states[i], states[i]);
    rest = rest - out.elements[i];
  }
  out.elements[4] = rest;
  return out;
}

struct OutcomeDistribution {
  std::array<double, kNumOutcomes> probs{};
};

/// Born-rule probabilities <psi|P_k|psi>. Rounding dust within 1e-12 of
/// [0, 1] is clamped; anything further out is an error.
inline OutcomeDistribution outcome_probabilities(const PovmSet& povm, const CVector& state) {
  if (state.dim() != kSystemDim) throw DimensionError("outcome_probabilities: need a 2-qubit state");
  if (std::abs(norm(state) - 1.0) > kDefaultTolerance)
    throw StructureError("outcome_probabilities: state is not normalized");
  constexpr double kDust = 1e-12;
  OutcomeDistribution out;
  for (std::size_t k = 0; k < kNumOutcomes; ++k) {
    const double pk = inner(state, multiply(povm.elements[k], state)).real();
    if (pk < -kDust || pk > 1.0 + kDust)
      throw StructureError("outcome_probabilities: probability " + std::to_string(pk) +
                           " outside [0, 1]");
    out.probs[k] = std::clamp(pk, 0.0, 1.0);
  }
  return out;
}

}  // namespace povmforge

#endif  // POVMFORGE_POVM_HPP

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

// Acceptance gate. One PASS/FAIL line per criterion; exit status is the
// number of failing criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "povmforge/cli.hpp"
#include "povmforge/decompose.hpp"
#include "povmforge/dilation.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/serialize.hpp"
#include "povmforge/sim.hpp"
#include "povmforge/synth.hpp"
#include "test_support.hpp"

namespace {

using namespace povmforge;
using povmforge::testing::column_formula;
using povmforge::testing::random_params;
using povmforge::testing::random_state;
using povmforge::testing::random_unitary;
using povmforge::testing::skewed_set;
using povmforge::testing::uniform_set;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// The 100 seeded parameter sets shared by the property criteria, with the
/// two named sets in front.
std::vector<PovmParams> parameter_sets() {
  std::mt19937_64 rng(2026);
  std::vector<PovmParams> sets{uniform_set(), skewed_set()};
  for (int k = 0; sets.size() < 100; ++k) sets.push_back(random_params(rng, k % 4 == 0));
  return sets;
}

/// sqrt(P_k) from the closed forms: q |Psi_k><Psi_k| for k < 4, diag(u, v, w, p) last.
std::array<CMatrix, 5> closed_form_roots(const PovmParams& p) {
  std::array<CMatrix, 5> out;
  const std::array<double, 4> c{p.alpha, p.beta, p.gamma, p.delta};
  static constexpr int kSign[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = CMatrix(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t s = 0; s < 4; ++s)
        out[k](r, s) = p.q * kSign[k][r] * kSign[k][s] / (c[r] * c[s]);
  }
  const std::array<Complex, 4> d{p.u, p.v, p.w, p.p};
  out[4] = CMatrix::diagonal(d);
  return out;
}

Outcome completeness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& p : parameter_sets()) {
    const PovmSet povm = build_povm(p);
    CMatrix sum(4, 4);
    for (const auto& e : povm.elements) sum = sum + e;
    worst = std::max(worst, frobenius_norm(sum - CMatrix::identity(4)));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst < 1e-12 && secs < 1.0,
          "max ||sum P - I||_F = " + fmt(worst) + " (< 1e-12), " + fmt(secs) + " s (< 1 s)"};
}

Outcome last_element_structure() {
  double diag_dev = 0.0, min_eig = 0.0;
  for (const auto& p : parameter_sets()) {
    const std::array<Complex, 4> d{p.u * p.u, p.v * p.v, p.w * p.w, p.p * p.p};
    const CMatrix p5 = build_povm(p).elements[4];
    diag_dev = std::max(diag_dev, max_abs(p5 - CMatrix::diagonal(d)));
  }
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const PovmParams p = random_params(rng, true);
    min_eig = std::max(min_eig, std::abs(eig_hermitian(build_povm(p).elements[4]).eigenvalues[0]));
  }
  const auto eig = eig_hermitian(build_povm(skewed_set()).elements[4]).eigenvalues;
  const std::array<double, 4> want{0.0, 0.5, 0.75, 0.75};
  double set_b = 0.0;
  for (std::size_t k = 0; k < 4; ++k) set_b = std::max(set_b, std::abs(eig[k] - want[k]));
  return {diag_dev < 1e-12 && min_eig < 1e-12 && set_b < 1e-12,
          "P5 vs diag = " + fmt(diag_dev) + ", |lambda_min| at optimal q = " + fmt(min_eig) +
              ", skewed-set spectrum error = " + fmt(set_b) + " (all < 1e-12)"};
}

Outcome dilation_contract() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  double defect = 0.0, contract = 0.0;
  const auto sets = parameter_sets();
  for (std::size_t i = 0; i < 12; ++i) {
    const PovmParams& p = sets[i];
    const CMatrix u = build_oracle_dilation(p).matrix;
    defect = std::max(defect, unitarity_defect(u));
    const auto roots = closed_form_roots(p);
    for (int k = 0; k < 100; ++k) {
      const CVector psi = random_state(rng, 4);
      const CVector lhs = multiply(u, kron(psi, CVector::basis(8, 0)));
      CVector rhs(32);
      for (std::size_t o = 0; o < 5; ++o) {
        const CVector part = multiply(roots[o], psi);
        for (std::size_t s = 0; s < 4; ++s) rhs[8 * s + o] = part[s];
      }
      contract = std::max(contract, norm(lhs - rhs));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {defect < 1e-10 && contract < 1e-10 && secs < 5.0,
          "12 sets x 100 states: unitarity defect = " + fmt(defect) + ", contract residual = " +
              fmt(contract) + " (< 1e-10), " + fmt(secs) + " s (< 5 s)"};
}

Outcome constrained_columns_cross_check() {
  double worst = 0.0;
  for (const auto& p : parameter_sets()) {
    const CMatrix v = constrained_columns(p);
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t a = 0; a < 8; ++a)
          worst = std::max(worst, std::abs(v(8 * r + a, s) - column_formula(p, r, a, s)));
  }
  return {worst < 1e-12, "max entry deviation = " + fmt(worst) + " (< 1e-12) over 100 sets"};
}

Outcome two_level_round_trip() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(9);
  double worst = 0.0;
  bool within_bound = true;
  std::string counts;
  for (std::size_t d : {4u, 8u, 16u, 32u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const CMatrix u = random_unitary(rng, d);
      const TwoLevelSeq seq = two_level_decompose(u);
      within_bound = within_bound && seq.ops.size() <= d * (d - 1) / 2;
      worst = std::max(worst, max_abs(reconstruct(seq) - u));
      if (trial == 0) counts += " d=" + std::to_string(d) + ":" + std::to_string(seq.ops.size());
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst < 1e-9 && within_bound && secs < 10.0,
          "max deviation = " + fmt(worst) + " (< 1e-9), ops within d(d-1)/2:" + counts + ", " +
              fmt(secs) + " s (< 10 s)"};
}

Outcome printed_matrix_audits() {
  const std::array<const char*, 5> required{
      "unitarity_defect", "constrained_columns_max_deviation", "dilation_contract_residual",
      "constrained_columns_vs_reference", "advisory:full_matrix_vs_reference"};
  bool complete = true;
  std::string findings;
  for (const char* inv : {"0.25,0.25,0.25,0.25", "0.5,0.25,0.125,0.125"}) {
    for (const bool matrix : {true, false}) {
      std::vector<std::string> args =
          matrix ? std::vector<std::string>{"paper-matrix"}
                 : std::vector<std::string>{"decompose", "--source", "paper"};
      args.insert(args.end(), {"--inv-sq", inv, "--q", "auto"});
      std::ostringstream out, err;
      if (cli::run_command(args, out, err) != 0) {
        complete = false;
        continue;
      }
      const Json j = Json::parse(out.str());
      const Json& checks = j.at("report").at("checks");
      for (const char* name : required) {
        bool found = false;
        for (const auto& c : checks)
          if (c.at("name") == name && c.at("residual").is_number()) found = true;
        complete = complete && found;
      }
      const std::string tag_prefix = matrix ? "tag (" : "factor ";
      std::size_t tags = 0;
      for (const auto& n : j.at("report").at("notes"))
        if (n.get<std::string>().starts_with(tag_prefix)) ++tags;
      complete = complete && (matrix ? tags > 0 : tags == 43);
      for (const auto& c : checks)
        if (c.at("name") == "unitarity_defect" || c.at("name") == "constrained_columns_max_deviation")
          findings += " " + std::string(matrix ? "M" : "F") + "[" + inv + "]." +
                      c.at("name").get<std::string>().substr(0, 11) + "=" +
                      fmt(c.at("residual").get<double>());
    }
  }
  return {complete, "4 reports complete with tags;" + findings};
}

Outcome synthesis_equivalence() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t max_controls = 0, mcu = 0;
  std::string counts;
  for (const PovmParams& p : {uniform_set(), skewed_set()}) {
    const Circuit c = compile_dilation(p, CompileSource::oracle);
    const GateCounts n = count_gates(c);
    max_controls = std::max(max_controls, n.max_controls);
    mcu += n.mcu;
    worst = std::max(worst, phase_aligned_max_deviation(circuit_unitary(c),
                                                        build_oracle_dilation(p).matrix));
    counts += " " + std::to_string(n.cnot) + " cnot/" + std::to_string(n.single) + " single;";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst < 1e-8 && max_controls <= 1 && mcu == 0 && secs < 60.0,
          "phase-aligned deviation = " + fmt(worst) + " (< 1e-8), max controls = " +
              std::to_string(max_controls) + ";" + counts + " " + fmt(secs) + " s (< 60 s)"};
}

Outcome sampling_statistics() {
  const auto t0 = Clock::now();
  const PovmParams b = skewed_set();
  const Circuit circ = compile_dilation(b, CompileSource::oracle);
  constexpr std::uint64_t kShots = 100000;
  constexpr std::uint64_t kSeed = 42;
  bool ok = true;
  std::string detail;
  for (const SampleRoute route : {SampleRoute::matrix, SampleRoute::circuit}) {
    const Histogram h0 = sample_povm(b, CVector::basis(4, 0), kShots, kSeed, route, &circ);
    const double s0 = std::sqrt(kShots * 0.25 * 0.75);
    for (std::size_t k = 0; k < 4; ++k) ok = ok && std::abs(h0.counts[k] - 25000.0) < 5 * s0;
    ok = ok && h0.counts[4] == 0;
    const Histogram h1 = sample_povm(b, CVector::basis(4, 1), kShots, kSeed, route, &circ);
    const double s1 = std::sqrt(kShots * 0.5 * 0.5);
    ok = ok && std::abs(h1.counts[4] - 50000.0) < 5 * s1;
    const Histogram again = sample_povm(b, CVector::basis(4, 0), kShots, kSeed, route, &circ);
    ok = ok && to_json(again).dump() == to_json(h0).dump();
    if (route == SampleRoute::circuit)
      detail = "|00>: " + to_json(h0)["counts"].dump() + ", |01> outcome 5: " +
               std::to_string(h1.counts[4]) + " (5 sigma = " + fmt(5 * s1) + ")";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {ok && secs < 30.0, detail + ", reruns byte-identical, " + fmt(secs) + " s (< 30 s)"};
}

Outcome collapse_correctness() {
  std::mt19937_64 rng(10);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const PovmParams& p : {uniform_set(), skewed_set()}) {
    const Circuit circ = compile_dilation(p, CompileSource::oracle);
    const auto roots = closed_form_roots(p);
    std::vector<CVector> inputs{CVector::basis(4, 0), CVector::basis(4, 1)};
    for (int k = 0; k < 8; ++k) inputs.push_back(random_state(rng, 4));
    for (const auto& psi : inputs) {
      const Statevector d = dilate(p, psi, SampleRoute::circuit, &circ);
      const auto probs = outcome_probabilities(build_povm(p), psi).probs;
      for (std::uint64_t shot = 0; shot < 200; ++shot) {
        const MeasurementRecord m = measure_ancilla(d, 1234, shot);
        const std::size_t o = static_cast<std::size_t>(m.outcome - 1);
        if (probs[o] <= 1e-6) continue;
        const CVector want = normalized(multiply(roots[o], psi));
        worst = std::max(worst, phase_aligned_max_deviation(m.post_state, want));
        ++checked;
      }
    }
  }
  return {worst < 1e-8 && checked > 0,
          std::to_string(checked) + " sampled post-states, max deviation = " + fmt(worst) +
              " (< 1e-8)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 POVM completeness", completeness},
      {"2 P5 structure", last_element_structure},
      {"3 dilation contract", dilation_contract},
      {"4 constrained-column cross-check", constrained_columns_cross_check},
      {"5 two-level round trip", two_level_round_trip},
      {"6 printed-matrix audit reports", printed_matrix_audits},
      {"7 synthesis equivalence", synthesis_equivalence},
      {"8 sampling statistics", sampling_statistics},
      {"9 collapse correctness", collapse_correctness},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

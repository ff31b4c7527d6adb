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

// Command-line driver. run_command() is the whole program minus main(), so
// tests can drive it in-process.
//
// Exit codes: 0 pass, 1 audit failure, 2 usage or input error.

#ifndef POVMFORGE_CLI_HPP
#define POVMFORGE_CLI_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "povmforge/circuit.hpp"
#include "povmforge/decompose.hpp"
#include "povmforge/dilation.hpp"
#include "povmforge/povm.hpp"
#include "povmforge/serialize.hpp"
#include "povmforge/sim.hpp"
#include "povmforge/synth.hpp"

namespace povmforge::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAuditFailure = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { json, text, qasm };

struct RunConfig {
  std::vector<double> inv_sq;  // reciprocal squares 1/alpha^2 .. 1/delta^2
  std::optional<double> alpha, beta, gamma, delta;
  std::string q = "auto";
  double tolerance = kDefaultTolerance;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 0;
  std::string output;
  OutputFormat format = OutputFormat::json;
  std::string source;
  std::string route = "matrix";
  std::string input = "00";
  bool reverse_order = false;
  bool strict = false;
};

/// Usage-level problems (bad flag combinations, malformed values).
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Reports

inline std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Serializes a report with stable field order and 12 significant digits.
inline std::string emit_report(const AuditReport& report, OutputFormat format) {
  if (format == OutputFormat::json) return to_json(report).dump();
  std::string out;
  for (const auto& c : report.checks)
    out += std::string(c.pass ? "PASS " : "FAIL ") + c.name + " " + format12(c.residual) + "\n";
  for (const auto& n : report.notes) out += "note: " + n + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parameter intake

inline PovmParams resolve_params(const RunConfig& cfg) {
  const bool direct = cfg.alpha || cfg.beta || cfg.gamma || cfg.delta;
  if (direct && !cfg.inv_sq.empty())
    throw UsageError("--inv-sq and --alpha/--beta/--gamma/--delta are mutually exclusive");
  double a = 0, b = 0, g = 0, d = 0;
  if (!cfg.inv_sq.empty()) {
    if (cfg.inv_sq.size() != 4) throw UsageError("--inv-sq needs exactly 4 values");
    for (double x : cfg.inv_sq)
      if (!(x > 0.0) || !std::isfinite(x)) throw UsageError("--inv-sq values must be positive");
    a = 1.0 / std::sqrt(cfg.inv_sq[0]);
    b = 1.0 / std::sqrt(cfg.inv_sq[1]);
    g = 1.0 / std::sqrt(cfg.inv_sq[2]);
    d = 1.0 / std::sqrt(cfg.inv_sq[3]);
  } else if (direct) {
    if (!(cfg.alpha && cfg.beta && cfg.gamma && cfg.delta))
      throw UsageError("--alpha, --beta, --gamma and --delta must be given together");
    a = *cfg.alpha;
    b = *cfg.beta;
    g = *cfg.gamma;
    d = *cfg.delta;
  } else {
    throw UsageError("parameters required: --inv-sq a,b,c,d or --alpha/--beta/--gamma/--delta");
  }
  double q = 0.0;
  if (cfg.q == "auto") {
    q = optimal_q(a, b, g, d);
  } else {
    try {
      std::size_t used = 0;
      q = std::stod(cfg.q, &used);
      if (used != cfg.q.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("--q must be 'auto' or a number");
    }
  }
  return validate_params(a, b, g, d, q);
}

inline CVector parse_input_state(const std::string& text, double tol) {
  static const std::array<std::string, 4> labels{"00", "01", "10", "11"};
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (text == labels[k]) return CVector::basis(kSystemDim, k);
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--input must be 00|01|10|11 or 4 (real) / 8 (re,im) amplitudes");
    }
  }
  CVector v(kSystemDim);
  if (values.size() == 4) {
    for (std::size_t k = 0; k < 4; ++k) v[k] = values[k];
  } else if (values.size() == 8) {
    for (std::size_t k = 0; k < 4; ++k) v[k] = Complex{values[2 * k], values[2 * k + 1]};
  } else {
    throw UsageError("--input must be 00|01|10|11 or 4 (real) / 8 (re,im) amplitudes");
  }
  if (std::abs(norm(v) - 1.0) > tol) throw UsageError("--input amplitudes are not normalized");
  return v;
}

inline Json params_json(const PovmParams& p) {
  return {{"alpha", round12(p.alpha)}, {"beta", round12(p.beta)}, {"gamma", round12(p.gamma)},
          {"delta", round12(p.delta)}, {"q", round12(p.q)}};
}

inline Json envelope(std::string_view command, const RunConfig& cfg, const PovmParams& p) {
  return {{"command", std::string(command)},
          {"tolerance", cfg.tolerance},
          {"params", params_json(p)}};
}

// ---------------------------------------------------------------------------
// Stages shared by several subcommands

namespace detail {

inline void add_check(AuditReport& r, std::string name, double residual, double tol) {
  r.checks.push_back({std::move(name), residual, residual <= tol});
}

/// Completeness, Hermiticity, positivity and P5 structure of the POVM.
inline AuditReport povm_report(const PovmSet& povm, double tol, Json* eigen_out = nullptr) {
  AuditReport r;
  CMatrix sum(kSystemDim, kSystemDim);
  double herm = 0.0, min_eig = 0.0;
  Json eigen = Json::array();
  for (const auto& e : povm.elements) {
    sum = sum + e;
    herm = std::max(herm, hermiticity_defect(e));
    const auto eig = eig_hermitian(e);
    min_eig = std::min(min_eig, eig.eigenvalues.front());
    Json vals = Json::array();
    for (double x : eig.eigenvalues) vals.push_back(round12(x));
    eigen.push_back(std::move(vals));
  }
  const auto& p = povm.params;
  const std::array<Complex, 4> diag{p.u * p.u, p.v * p.v, p.w * p.w, p.p * p.p};
  add_check(r, "completeness_frobenius", frobenius_norm(sum - CMatrix::identity(kSystemDim)), tol);
  add_check(r, "hermiticity_max", herm, tol);
  add_check(r, "negative_eigenvalue", std::max(0.0, -min_eig), tol);
  add_check(r, "p5_vs_diag_u2_v2_w2_p2", max_abs(povm.elements[4] - CMatrix::diagonal(diag)), tol);
  if (max_abs(povm.elements[4]) <= tol)
    r.notes.push_back("P5 = 0: the measurement is projective onto the orthonormal |Psi_i>");
  else
    r.notes.push_back("P5 != 0: outcome 5 is the inconclusive branch");
  if (eigen_out) *eigen_out = std::move(eigen);
  return r;
}

/// Per-factor 2x2 orthogonality of the printed factorization, with tags.
inline void factor_notes(AuditReport& r, const PovmParams& params, double tol) {
  double worst = 0.0;
  std::size_t index = 0;
  for (const auto& f : paper_factor_table()) {
    const double defect = unitarity_defect(evaluate_block(f, params));
    worst = std::max(worst, defect);
    r.notes.push_back("factor " + std::to_string(++index) + " (" + std::to_string(f.i1) + "," +
                      std::to_string(f.j1) + ") [" + std::string(f.tags[0]) + ", " +
                      std::string(f.tags[1]) + "; " + std::string(f.tags[2]) + ", " +
                      std::string(f.tags[3]) + "] unitarity defect " + format12(defect) +
                      (defect > tol ? " FINDING" : ""));
  }
  add_check(r, "factor_block_unitarity_max", worst, tol);
}

inline void merge(AuditReport& into, const AuditReport& from, const std::string& prefix,
                  bool advisory) {
  constexpr std::string_view kTag = "advisory:";
  for (auto c : from.checks) {
    const bool tagged = c.name.starts_with(kTag);
    const std::string name = tagged ? c.name.substr(kTag.size()) : c.name;
    c.name = (advisory || tagged ? std::string(kTag) : std::string()) + prefix + name;
    into.checks.push_back(std::move(c));
  }
  for (const auto& n : from.notes) into.notes.push_back(prefix + n);
}

/// Chi-square critical values at 99.9% for 1..4 degrees of freedom.
inline constexpr std::array<double, 5> kChi2Critical999{0.0, 10.828, 13.816, 16.266, 18.467};

inline double chi_square(const Histogram& h) {
  double chi = 0.0;
  for (std::size_t k = 0; k < kNumOutcomes; ++k) {
    const double e = h.expected[k] * static_cast<double>(h.shots);
    if (e <= 0.0) continue;
    const double diff = static_cast<double>(h.counts[k]) - e;
    chi += diff * diff / e;
  }
  return chi;
}

inline std::size_t degrees_of_freedom(const Histogram& h) {
  std::size_t bins = 0;
  for (double p : h.expected)
    if (p > 0.0) ++bins;
  return bins == 0 ? 0 : bins - 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands. Each returns the exit code and writes its artifact to `out`.

inline int cmd_povm(const RunConfig& cfg, std::ostream& out) {
  const PovmParams p = resolve_params(cfg);
  const PovmSet povm = build_povm(p);
  Json eigen;
  const AuditReport report = detail::povm_report(povm, cfg.tolerance, &eigen);
  if (cfg.format == OutputFormat::text) {
    out << emit_report(report, OutputFormat::text);
  } else {
    Json j = envelope("povm", cfg, p);
    j["povm"] = to_json(povm);
    j["eigenvalues"] = std::move(eigen);
    j["report"] = to_json(report);
    out << j.dump(2) << "\n";
  }
  return report.passed() ? kExitPass : kExitAuditFailure;
}

inline int cmd_dilate(const RunConfig& cfg, std::ostream& out) {
  const PovmParams p = resolve_params(cfg);
  const PovmSet povm = build_povm(p);
  const DilationUnitary oracle = build_oracle_dilation(p);
  const AuditReport report = audit_dilation(oracle, oracle, povm, cfg.tolerance);
  if (cfg.format == OutputFormat::text) {
    out << emit_report(report, OutputFormat::text);
  } else {
    Json j = envelope("dilate", cfg, p);
    j["source"] = std::string(to_string(oracle.source));
    j["matrix"] = matrix_to_json(oracle.matrix);
    j["report"] = to_json(report);
    out << j.dump(2) << "\n";
  }
  return report.passed() ? kExitPass : kExitAuditFailure;
}

inline int cmd_paper_matrix(const RunConfig& cfg, std::ostream& out) {
  const PovmParams p = resolve_params(cfg);
  const PovmSet povm = build_povm(p);
  const DilationUnitary paper = transcribe_paper_matrix(p);
  const AuditReport report =
      audit_dilation(paper, build_oracle_dilation(p), povm, cfg.tolerance);
  if (cfg.format == OutputFormat::text) {
    out << emit_report(report, OutputFormat::text);
  } else {
    Json j = envelope("paper-matrix", cfg, p);
    j["source"] = std::string(to_string(paper.source));
    Json tags = Json::array();
    for (std::size_t r = 0; r < kDilationDim; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < kDilationDim; ++c) row.push_back(std::string(paper_matrix_tag(r, c)));
      tags.push_back(std::move(row));
    }
    j["tags"] = std::move(tags);
    j["matrix"] = matrix_to_json(paper.matrix);
    j["report"] = to_json(report);
    out << j.dump(2) << "\n";
  }
  // Mismatches against the printed matrix are findings; --strict gates on them.
  return (!cfg.strict || report.passed()) ? kExitPass : kExitAuditFailure;
}

inline int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const PovmParams p = resolve_params(cfg);
  const PovmSet povm = build_povm(p);
  const DilationUnitary oracle = build_oracle_dilation(p);
  const std::string source = cfg.source.empty() ? "generic" : cfg.source;
  TwoLevelSeq seq;
  AuditReport report;
  bool gate = true;
  if (source == "generic") {
    if (cfg.reverse_order) throw UsageError("--reverse-order applies to --source paper only");
    seq = two_level_decompose(oracle.matrix, cfg.tolerance);
    const CMatrix back = reconstruct(seq);
    report = audit_dilation({back, DilationSource::oracle, p}, oracle, povm, cfg.tolerance);
    detail::add_check(report, "roundtrip_frobenius", frobenius_norm(back - oracle.matrix),
                      1e-9);
    const std::size_t bound = seq.dim * (seq.dim - 1) / 2;
    report.checks.push_back({"op_count_minus_bound",
                             static_cast<double>(seq.ops.size()) - static_cast<double>(bound),
                             seq.ops.size() <= bound});
    report.notes.push_back(std::to_string(seq.ops.size()) + " two-level ops (bound " +
                           std::to_string(bound) + ")");
  } else if (source == "paper") {
    seq = paper_factorization(p);
    if (cfg.reverse_order) seq = reversed(seq);
    report = audit_dilation({reconstruct(seq), DilationSource::paper_product, p}, oracle, povm,
                            cfg.tolerance);
    detail::factor_notes(report, p, cfg.tolerance);
    detail::add_check(report, "advisory:product_vs_paper_matrix",
                      max_abs(reconstruct(seq) - transcribe_paper_matrix(p).matrix),
                      cfg.tolerance);
    report.notes.push_back(std::string("product order: ") +
                           (cfg.reverse_order ? "reversed (diagnostic)" : "left-first as printed"));
    gate = cfg.strict;
  } else {
    throw UsageError("--source must be generic or paper");
  }
  if (cfg.format == OutputFormat::text) {
    out << emit_report(report, OutputFormat::text);
  } else {
    Json j = envelope("decompose", cfg, p);
    j["source"] = source;
    j["sequence"] = to_json(seq);
    j["report"] = to_json(report);
    out << j.dump(2) << "\n";
  }
  return (!gate || report.passed()) ? kExitPass : kExitAuditFailure;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const PovmParams p = resolve_params(cfg);
  const std::string source = cfg.source.empty() ? "oracle" : cfg.source;
  CompileSource cs;
  if (source == "oracle") cs = CompileSource::oracle;
  else if (source == "paper") cs = CompileSource::paper_product;
  else throw UsageError("--source must be oracle or paper");

  const Compilation comp = compile_pipeline(p, cs);
  const GateCounts routed = count_gates(comp.routed);
  const GateCounts lowered = count_gates(comp.lowered);
  const double deviation = phase_aligned_max_deviation(circuit_unitary(comp.lowered), comp.target);
  constexpr double kLoweringTol = 1e-8;
  const bool ok = deviation <= kLoweringTol && lowered.max_controls <= 1;

  if (cfg.format == OutputFormat::qasm) out << to_qasm_like(comp.lowered);
  else if (cfg.format == OutputFormat::text)
    out << "two_level_ops " << comp.factors.ops.size() << "\nrouted_mcu " << routed.mcu
        << "\nsingle " << lowered.single << "\ncnot " << lowered.cnot << "\nmax_controls "
        << lowered.max_controls << "\nequivalence_max_deviation " << format12(deviation) << "\n";
  else out << to_json(comp.lowered).dump() << "\n";

  log << "synth: source=" << source << " two_level_ops=" << comp.factors.ops.size()
      << " routed_mcu=" << routed.mcu << " single=" << lowered.single
      << " cnot=" << lowered.cnot << " max_controls=" << lowered.max_controls
      << " equivalence=" << format12(deviation) << " tolerance=" << format12(kLoweringTol)
      << (ok ? " PASS" : " FAIL") << "\n";
  return ok ? kExitPass : kExitAuditFailure;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const PovmParams p = resolve_params(cfg);
  const CVector input = parse_input_state(cfg.input, cfg.tolerance);
  SampleRoute route;
  if (cfg.route == "matrix") route = SampleRoute::matrix;
  else if (cfg.route == "circuit") route = SampleRoute::circuit;
  else throw UsageError("--route must be matrix or circuit");
  if (cfg.shots == 0) throw UsageError("--shots must be at least 1");
  const Histogram h = sample_povm(p, input, cfg.shots, cfg.seed, route);
  out << to_json(h).dump() << "\n";
  log << "simulate: route=" << cfg.route << " chi2=" << format12(detail::chi_square(h))
      << " dof=" << detail::degrees_of_freedom(h) << " tolerance=" << format12(cfg.tolerance)
      << "\n";
  return kExitPass;
}

/// Every stage chained, one report.
inline AuditReport verify_report(const PovmParams& p, const RunConfig& cfg) {
  const double tol = cfg.tolerance;
  AuditReport report;
  const PovmSet povm = build_povm(p);
  detail::merge(report, detail::povm_report(povm, tol), "povm.", false);

  const DilationUnitary oracle = build_oracle_dilation(p);
  detail::merge(report, audit_dilation(oracle, oracle, povm, tol), "oracle.", false);

  // The printed matrix and factorization are audited as findings only.
  detail::merge(report, audit_dilation(transcribe_paper_matrix(p), oracle, povm, tol),
                "paper_matrix.", true);
  const TwoLevelSeq printed = paper_factorization(p);
  AuditReport product =
      audit_dilation({reconstruct(printed), DilationSource::paper_product, p}, oracle, povm, tol);
  detail::factor_notes(product, p, tol);
  detail::merge(report, product, "paper_product.", true);

  const TwoLevelSeq seq = two_level_decompose(oracle.matrix, tol);
  detail::add_check(report, "decompose.roundtrip_frobenius",
                    frobenius_norm(reconstruct(seq) - oracle.matrix), 1e-9);
  const Compilation comp = compile_pipeline(p, CompileSource::oracle);
  const CMatrix routed_u = circuit_unitary(comp.routed);
  const CMatrix lowered_u = circuit_unitary(comp.lowered);
  detail::add_check(report, "synth.routed_exact_max", max_abs(routed_u - oracle.matrix), tol);
  detail::add_check(report, "synth.lowered_phase_aligned_max",
                    phase_aligned_max_deviation(lowered_u, oracle.matrix), 1e-8);
  const GateCounts counts = count_gates(comp.lowered);
  report.checks.push_back({"synth.max_controls", static_cast<double>(counts.max_controls),
                           counts.max_controls <= 1});
  report.notes.push_back("synth: " + std::to_string(comp.factors.ops.size()) +
                         " two-level ops, " + std::to_string(counts.single) + " single, " +
                         std::to_string(counts.cnot) + " cnot");

  // Sampling on each basis input through both routes.
  const auto roots = sqrt_elements(povm);
  double worst_collapse = 0.0;
  bool routes_agree = true, chi_ok = true;
  for (std::size_t k = 0; k < kSystemDim; ++k) {
    const CVector input = CVector::basis(kSystemDim, k);
    const Histogram hm = sample_povm(p, input, cfg.shots, cfg.seed, SampleRoute::matrix);
    const Histogram hc =
        sample_povm(p, input, cfg.shots, cfg.seed, SampleRoute::circuit, &comp.lowered);
    routes_agree = routes_agree && hm.counts == hc.counts;
    const std::size_t dof = detail::degrees_of_freedom(hm);
    if (dof > 0 && detail::chi_square(hm) > detail::kChi2Critical999[dof]) chi_ok = false;
    const Statevector dilated = dilate(p, input, SampleRoute::circuit, &comp.lowered);
    const auto probs = ancilla_distribution(dilated);
    for (std::size_t o = 0; o < kNumOutcomes; ++o) {
      if (probs[o] <= 1e-6) continue;
      const CVector want = normalized(multiply(roots[o], input));
      worst_collapse = std::max(
          worst_collapse,
          phase_aligned_max_deviation(conditional_system_state(dilated, o), want));
    }
  }
  report.checks.push_back({"sim.routes_identical_histograms", routes_agree ? 0.0 : 1.0, routes_agree});
  report.checks.push_back({"sim.chi_square_below_999", chi_ok ? 0.0 : 1.0, chi_ok});
  detail::add_check(report, "sim.collapse_max", worst_collapse, 1e-8);
  report.notes.push_back("sampling: " + std::to_string(cfg.shots) + " shots per basis input, seed " +
                         std::to_string(cfg.seed));
  return report;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const PovmParams p = resolve_params(cfg);
  const AuditReport report = verify_report(p, cfg);
  if (cfg.format == OutputFormat::text) {
    out << emit_report(report, OutputFormat::text);
  } else {
    Json j = envelope("verify", cfg, p);
    j["passed"] = report.passed();
    j["report"] = to_json(report);
    out << j.dump(2) << "\n";
  }
  return report.passed() ? kExitPass : kExitAuditFailure;
}

// ---------------------------------------------------------------------------

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("POVMFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("POVMFORGE_SEED must be an unsigned integer");
    }
  }
  return 0;
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"povmforge: five-outcome POVM, its dilation unitary and circuit compilation"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";

  auto add_common = [&](CLI::App* sub) {
    auto* inv = sub->add_option("--inv-sq", cfg.inv_sq,
                                "1/alpha^2,1/beta^2,1/gamma^2,1/delta^2 (must sum to 1)")
                    ->delimiter(',')
                    ->expected(1, 64);
    sub->add_option("--alpha", cfg.alpha, "alpha (nonzero real)")->excludes(inv);
    sub->add_option("--beta", cfg.beta, "beta")->excludes(inv);
    sub->add_option("--gamma", cfg.gamma, "gamma")->excludes(inv);
    sub->add_option("--delta", cfg.delta, "delta")->excludes(inv);
    sub->add_option("--q", cfg.q, "'auto' (q^2 = mu^2/4) or an explicit value");
    sub->add_option("--tolerance", cfg.tolerance, "equality tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--output,-o", cfg.output, "write the artifact to this file");
    sub->add_option("--format", format, "json | text | qasm (synth only)")
        ->check(CLI::IsMember({"json", "text", "qasm"}));
    sub->add_flag("--strict", cfg.strict, "treat findings on printed matrices as failures");
  };

  auto* povm = app.add_subcommand("povm", "build the POVM and report its spectrum");
  auto* dilate = app.add_subcommand("dilate", "oracle dilation unitary and its audit");
  auto* paper = app.add_subcommand("paper-matrix", "printed 32x32 matrix and its audit");
  auto* decompose = app.add_subcommand("decompose", "two-level factorization");
  auto* synth = app.add_subcommand("synth", "compile the dilation to CNOT + single-qubit gates");
  auto* simulate = app.add_subcommand("simulate", "sample POVM outcomes through the dilation");
  auto* verify = app.add_subcommand("verify", "end-to-end audit of every stage");
  for (auto* sub : {povm, dilate, paper, decompose, synth, simulate, verify}) add_common(sub);

  decompose->add_option("--source", cfg.source, "generic | paper");
  decompose->add_flag("--reverse-order", cfg.reverse_order,
                      "diagnostic: multiply the printed factors in reverse order");
  synth->add_option("--source", cfg.source, "oracle | paper");
  for (auto* sub : {simulate, verify}) {
    sub->add_option("--shots", cfg.shots, "number of shots");
    sub->add_option("--seed", cfg.seed, "sampling seed (default $POVMFORGE_SEED or 0)");
  }
  simulate->add_option("--input", cfg.input, "00|01|10|11 or comma-separated amplitudes");
  simulate->add_option("--route", cfg.route, "matrix | circuit");

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    cfg.seed = default_seed();
    app.parse(reversed_args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (format == "json") cfg.format = OutputFormat::json;
  else if (format == "text") cfg.format = OutputFormat::text;
  else cfg.format = OutputFormat::qasm;
  if (cfg.format == OutputFormat::qasm && !synth->parsed()) {
    err << "usage error: --format qasm is only valid for synth\n";
    return kExitUsage;
  }

  std::ostringstream buffer;
  int code = kExitPass;
  try {
    if (povm->parsed()) code = cmd_povm(cfg, buffer);
    else if (dilate->parsed()) code = cmd_dilate(cfg, buffer);
    else if (paper->parsed()) code = cmd_paper_matrix(cfg, buffer);
    else if (decompose->parsed()) code = cmd_decompose(cfg, buffer);
    else if (synth->parsed()) code = cmd_synth(cfg, buffer, err);
    else if (simulate->parsed()) code = cmd_simulate(cfg, buffer, err);
    else code = cmd_verify(cfg, buffer);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NormalizationError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PositivityError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitAuditFailure;
  }

  if (cfg.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "error: cannot write " << cfg.output << "\n";
      return kExitAuditFailure;
    }
  }
  return code;
}

}  // namespace povmforge::cli

#endif  // POVMFORGE_CLI_HPP

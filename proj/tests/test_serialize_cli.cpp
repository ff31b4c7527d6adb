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

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "povmforge/cli.hpp"
#include "povmforge/serialize.hpp"
#include "test_support.hpp"

namespace povmforge {
namespace {

using testing::random_unitary;
using testing::skewed_set;

struct CliResult {
  int code = 0;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kSkewed{"--inv-sq", "0.5,0.25,0.125,0.125", "--q", "auto"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

TEST(Report, EmptyJson) {
  EXPECT_EQ(cli::emit_report({}, cli::OutputFormat::json), R"({"checks":[],"notes":[]})");
}

TEST(Report, OnePassingCheck) {
  AuditReport r;
  r.checks.push_back({"unitarity_defect", 1.2345678901234567e-13, true});
  EXPECT_EQ(cli::emit_report(r, cli::OutputFormat::json),
            R"({"checks":[{"name":"unitarity_defect","residual":1.23456789012e-13,"pass":true}],"notes":[]})");
  EXPECT_EQ(cli::emit_report(r, cli::OutputFormat::text), "PASS unitarity_defect 1.23456789012e-13\n");
}

TEST(Report, VerifyReportRoundTrips) {
  cli::RunConfig cfg;
  cfg.shots = 2000;
  const AuditReport r = cli::verify_report(skewed_set(), cfg);
  const std::string once = cli::emit_report(r, cli::OutputFormat::json);
  const AuditReport back = audit_report_from_json(Json::parse(once));
  EXPECT_EQ(cli::emit_report(back, cli::OutputFormat::json), once);
  EXPECT_TRUE(r.passed());
}

TEST(Serialize, TwoLevelSequenceRoundTrip) {
  std::mt19937_64 rng(71);
  const TwoLevelSeq seq = two_level_decompose(random_unitary(rng, 8));
  const TwoLevelSeq back = two_level_seq_from_json(Json::parse(to_json(seq).dump()));
  EXPECT_EQ(max_abs(reconstruct(back) - reconstruct(seq)), 0.0);
}

TEST(Serialize, CircuitRoundTrips) {
  std::mt19937_64 rng(72);
  const Circuit c{3, {SingleGate{1, random_unitary(rng, 2)}, CnotGate{2, 0},
                      McuGate{{{0, false}, {1, true}}, 2, random_unitary(rng, 2)}}};
  const Circuit back = circuit_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(max_abs(circuit_unitary(back) - circuit_unitary(c)), 0.0);
  EXPECT_THROW(to_qasm_like(c), Error);

  const Circuit lowered = lower_multicontrolled(c);
  const Circuit parsed = circuit_from_qasm_like(to_qasm_like(lowered));
  EXPECT_EQ(max_abs(circuit_unitary(parsed) - circuit_unitary(lowered)), 0.0);
}

TEST(Serialize, RejectsUnknownGate) {
  const Json j = Json::parse(R"({"version":1,"qubits":1,"convention":"msb-first","gates":[{"kind":"ccx"}]})");
  EXPECT_THROW(circuit_from_json(j), Error);
  EXPECT_THROW(circuit_from_qasm_like("qubits 1\nswap 0 1\n"), Error);
}

TEST(Cli, UniformVerifyReportsProjectiveBranch) {
  const CliResult r = invoke({"verify", "--inv-sq", "0.25,0.25,0.25,0.25", "--q", "auto", "--shots",
                        "5000"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("P5 = 0"), std::string::npos);
  EXPECT_NE(r.out.find("\"tolerance\": 1e-10"), std::string::npos);
}

TEST(Cli, ArityIsAUsageError) {
  const CliResult r = invoke({"povm", "--inv-sq", "0.5,0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("exactly 4"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"povm"}).code, 2);
  EXPECT_EQ(invoke({"povm", "--inv-sq", "0.5,0.5,0.5,0.5"}).code, 2);
  EXPECT_EQ(invoke(with({"povm", "--alpha", "2"}, kSkewed)).code, 2);
  EXPECT_EQ(invoke(with({"povm", "--q", "abc"}, {"--inv-sq", "0.25,0.25,0.25,0.25"})).code, 2);
  EXPECT_EQ(invoke(with({"simulate", "--shots", "0"}, kSkewed)).code, 2);
  EXPECT_EQ(invoke(with({"simulate", "--route", "tape"}, kSkewed)).code, 2);
  EXPECT_EQ(invoke(with({"decompose", "--source", "other"}, kSkewed)).code, 2);
  EXPECT_EQ(invoke(with({"povm", "--format", "qasm"}, kSkewed)).code, 2);
}

TEST(Cli, ValidationErrorNamesConstraint) {
  const CliResult r = invoke({"povm", "--inv-sq", "0.5,0.25,0.125,0.125", "--q", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("positivity"), std::string::npos);
}

TEST(Cli, DirectParameterForm) {
  const CliResult r = invoke({"povm", "--alpha", "2", "--beta", "-2", "--gamma", "2", "--delta", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, SimulateSkewedBasisZero) {
  const CliResult r = invoke(with({"simulate", "--input", "00", "--shots", "100000", "--seed", "42"},
                            kSkewed));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["counts"][4].get<std::uint64_t>(), 0u);
  EXPECT_EQ(j["shots"].get<std::uint64_t>(), 100000u);
  EXPECT_NE(r.err.find("tolerance="), std::string::npos);
}

TEST(Cli, IdenticalInvocationsAreByteIdentical) {
  for (const auto& cmd : {std::vector<std::string>{"simulate", "--input", "01", "--seed", "9"},
                          std::vector<std::string>{"povm"}, std::vector<std::string>{"dilate"},
                          std::vector<std::string>{"decompose"}}) {
    const auto args = with(cmd, kSkewed);
    const CliResult a = invoke(args), b = invoke(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("POVMFORGE_SEED", "17", 1);
  const CliResult env = invoke(with({"simulate", "--input", "01", "--shots", "1000"}, kSkewed));
  ::unsetenv("POVMFORGE_SEED");
  const CliResult flag =
      invoke(with({"simulate", "--input", "01", "--shots", "1000", "--seed", "17"}, kSkewed));
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(Json::parse(env.out)["seed"].get<int>(), 17);
}

TEST(Cli, ToleranceOverrideIsReported) {
  const CliResult r = invoke(with({"dilate", "--tolerance", "1e-6"}, kSkewed));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["tolerance"].get<double>(), 1e-6);
}

TEST(Cli, PrintedAuditsEmitCompleteReports) {
  for (const char* inv : {"0.25,0.25,0.25,0.25", "0.5,0.25,0.125,0.125"}) {
    const CliResult m = invoke({"paper-matrix", "--inv-sq", inv, "--q", "auto"});
    ASSERT_EQ(m.code, 0) << m.err;
    const Json jm = Json::parse(m.out);
    EXPECT_EQ(jm["report"]["checks"].size(), 5u);
    EXPECT_EQ(jm["tags"][0][0].get<std::string>(), "q/aa");

    const CliResult d = invoke({"decompose", "--source", "paper", "--inv-sq", inv, "--q", "auto"});
    ASSERT_EQ(d.code, 0) << d.err;
    const Json jd = Json::parse(d.out);
    EXPECT_EQ(jd["sequence"]["ops"].size(), 43u);
    std::size_t factor_notes = 0;
    for (const auto& n : jd["report"]["notes"])
      if (n.get<std::string>().starts_with("factor ")) ++factor_notes;
    EXPECT_EQ(factor_notes, 43u);
  }
}

TEST(Cli, ReversedOrderIsAFindingUnlessStrict) {
  const auto args = with({"decompose", "--source", "paper", "--reverse-order"}, kSkewed);
  EXPECT_EQ(invoke(args).code, 0);
  EXPECT_EQ(invoke(with(args, {"--strict"})).code, 1);
}

TEST(Cli, SynthFormats) {
  const CliResult json = invoke(with({"synth"}, kSkewed));
  ASSERT_EQ(json.code, 0) << json.err;
  const Circuit c = circuit_from_json(Json::parse(json.out));
  EXPECT_LE(count_gates(c).max_controls, 1u);
  const CliResult qasm = invoke(with({"synth", "--format", "qasm"}, kSkewed));
  ASSERT_EQ(qasm.code, 0);
  const Circuit q = circuit_from_qasm_like(qasm.out);
  EXPECT_EQ(q.gates.size(), c.gates.size());
  EXPECT_NE(json.err.find("cnot="), std::string::npos);
}

TEST(Cli, WritesOutputFile) {
  const std::string path = ::testing::TempDir() + "povm.json";
  const CliResult r = invoke(with({"povm", "--output", path}, kSkewed));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["command"].get<std::string>(), "povm");
}

}  // namespace
}  // namespace povmforge

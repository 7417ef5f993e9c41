// Copyright 2026 The dlvn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlvn/cli/commands.hpp"

namespace dlvn::cli {
namespace {

namespace fs = std::filesystem;

const char* kSingleSite = R"([system]
builder = single_site
eps0 = 0
[lead_L]
N = 16
t_hop = 1
v0 = 0.2
gamma = 0.05
[lead_R]
N = 16
t_hop = 1
v0 = 0.2
gamma = 0.05
[fermi]
mu_L = 0.25
mu_R = -0.25
T = 0
)";

std::string with_run(const std::string& base, const std::string& run) { return base + "[run]\n" + run; }

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

/// Every occurrence.
std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
  return s;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("dlvn_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(RunMode mode, const std::string& config_text, CommandOptions options = {}) {
  TempDir dir;
  options.config_path = dir.write("run.ini", config_text);
  std::ostringstream out, err;
  Run r;
  r.code = run_command(mode, options, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ls(line);
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

TEST(ParseConfig, MinimalSingleSite) {
  const auto c = parse_config(with_run(kSingleSite, "method = pole_sum\n"));
  EXPECT_EQ(c.mode, RunMode::SinglePoint);
  EXPECT_EQ(c.methods, std::vector<CurrentMethod>{CurrentMethod::PoleSum});
  EXPECT_EQ(c.lead_L.chain.n_modes, 16);
  EXPECT_EQ(std::get<UniformGamma>(c.lead_R.chain.gamma).gamma, 0.05);
  EXPECT_EQ(c.fermi, (FermiParameters{0.25, -0.25, 0.0}));
  EXPECT_TRUE(c.junction_template().build().identical_reservoirs());
}

TEST(ParseConfig, MixedModesAreUsageError) {
  EXPECT_THROW(parse_config(with_run(kSingleSite, "method = all\nsweep = gamma\nsweep_values = 0.1\n")), UsageError);
  EXPECT_THROW(parse_config(with_run(kSingleSite, "")), UsageError);
}

TEST(ParseConfig, NegativeGammaNamesKeyAndLine) {
  const std::string text = replace(with_run(kSingleSite, "method = all\n"), "gamma = 0.05", "gamma = -0.05");
  try {
    parse_config(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 8);
    EXPECT_NE(std::string(e.what()).find("lead_L.gamma"), std::string::npos);
  }
}

TEST(ParseConfig, UnknownKeyTypeMismatchAndMissingKey) {
  try {
    parse_config(with_run(kSingleSite, "method = all\ncolour = blue\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 20);
    EXPECT_NE(std::string(e.what()).find("run.colour"), std::string::npos);
  }
  try {
    parse_config(replace(with_run(kSingleSite, "method = all\n"), "N = 16", "N = sixteen"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
  try {
    parse_config(replace(with_run(kSingleSite, "method = all\n"), "mu_R = -0.25\n", ""));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("fermi.mu_R"), std::string::npos);
  }
  EXPECT_THROW(parse_config(with_run(kSingleSite, "method = warp_drive\n")), ParseError);
  EXPECT_THROW(parse_config(with_run(kSingleSite, "method = all\n[extra]\n")), ParseError);
  EXPECT_THROW(parse_config(replace(with_run(kSingleSite, "method = all\n"), "T = 0", "T = -1")), ParseError);
  EXPECT_THROW(parse_config(with_run(kSingleSite, "method = all\nmethod = pole_sum\n")), ParseError);
}

TEST(ParseConfig, RawJunction) {
  const std::string text = R"([system]
builder = raw
row = 0.1 0 0.3 0.1
row = 0.3 -0.1 -0.2 0
[lead_L]
mode = -0.5 0.1 0.2 0 0 0
mode = 0.5 0.2 0.1 0.05 0 0
[lead_R]
mode = 0 0.3 0 0 0.25 0
[fermi]
mu_L = 0.2
mu_R = -0.2
T = 0.01
[run]
method = trace_integral,oracle_sylvester
)";
  const auto c = parse_config(text);
  const auto j = c.junction_template().build();
  EXPECT_EQ(j.system_dim(), 2);
  EXPECT_EQ(j.lead_L().size(), 2u);
  EXPECT_EQ(j.lead_L().modes()[1].coupling(0), Complex(0.1, 0.05));
  EXPECT_EQ(parse_config(echo_config(c)), c);
  EXPECT_THROW(parse_config(replace(text, "row = 0.3 -0.1", "row = 0.3 0.1")), ParseError);
  EXPECT_THROW(parse_config(replace(text, "mode = 0 0.3 0 0 0.25 0", "mode = 0 0.3 0 0")), ParseError);
}

TEST(ParseConfig, EchoRoundTripsEveryMode) {
  const std::string two_site = replace(replace(kSingleSite, "builder = single_site\neps0 = 0",
                                               "builder = two_site\neps1 = 0.1\neps2 = -0.2\nh12 = 0.5\nh12_im = 0.1"),
                                       "gamma = 0.05", "gamma_spacing = 0.7");
  const std::vector<std::string> texts = {
      with_run(kSingleSite, "method = all\noutput = x.csv\n"),
      with_run(two_site, "method = pole_sum,nonmarkovian\n"),
      with_run(kSingleSite, "sweep = bias\nsweep_values = 0.4,0.2,0.1\nsweep_methods = all\n"),
      with_run(kSingleSite, "converge_N = 8,16\ngamma_rule = spacing\ngamma_c = 1.5\n"),
      with_run(kSingleSite, "validate = true\nrandom_junctions = 2\ndebug_corrupt_hermiticity = true\n"),
      with_run(replace(kSingleSite, "[fermi]", "[quadrature]\nrel_tol = 1e-10\nmax_panels = 500\nsplit_at_poles = false\n[fermi]"),
               "method = all\n"),
  };
  for (const auto& t : texts) {
    const auto c = parse_config(t);
    const auto echoed = echo_config(c);
    EXPECT_EQ(parse_config(echoed), c) << echoed;
    EXPECT_EQ(echo_config(parse_config(echoed)), echoed);
  }
}

TEST(ParseConfig, RelTolPrecedence) {
  const std::string plain = with_run(kSingleSite, "method = pole_sum\n");
  const std::string explicit_tol = replace(plain, "[fermi]", "[quadrature]\nrel_tol = 1e-9\n[fermi]");
  ::unsetenv(kRelTolEnv);
  EXPECT_EQ(parse_config(plain).quadrature.rel_tol, kDefaultRelTol);
  ::setenv(kRelTolEnv, "3e-7", 1);
  EXPECT_EQ(parse_config(plain).quadrature.rel_tol, 3e-7);
  EXPECT_EQ(parse_config(explicit_tol).quadrature.rel_tol, 1e-9);
  TempDir dir;
  CommandOptions options;
  options.config_path = dir.write("c.ini", explicit_tol);
  options.rel_tol = 2e-6;
  EXPECT_EQ(load_config(options).quadrature.rel_tol, 2e-6);
  ::setenv(kRelTolEnv, "bogus", 1);
  EXPECT_THROW(parse_config(plain), UsageError);
  ::unsetenv(kRelTolEnv);
}

TEST(CmdCurrent, ZeroBiasAllMethodsVanish) {
  const auto r = run(RunMode::SinglePoint,
                     with_run(replace(kSingleSite, "mu_R = -0.25", "mu_R = 0.25"), "method = all\n"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  EXPECT_EQ(rows.size(), 8u);
  for (const auto& row : rows) EXPECT_LE(std::abs(std::stod(row[3])), 1e-12) << row[2];
}

TEST(CmdCurrent, PoleSumAgreesWithTraceIntegral) {
  const auto r = run(RunMode::SinglePoint, with_run(kSingleSite, "method = pole_sum,trace_integral\n"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][2], "pole_sum");
  EXPECT_EQ(rows[1][2], "trace_integral");
  EXPECT_LT(relative_deviation(std::stod(rows[0][3]), std::stod(rows[1][3])), 1e-8);
}

TEST(CmdCurrent, EchoBlockReconstructsRun) {
  const std::string text = with_run(kSingleSite, "method = pole_sum\n");
  const auto r = run(RunMode::SinglePoint, text);
  EXPECT_EQ(parse_config(extract_comment_block(r.out)), parse_config(text));
}

TEST(CmdCurrent, PoleSumOnUnequalLeadsIsUsageError) {
  const auto r = run(RunMode::SinglePoint,
                     with_run(replace(kSingleSite, "N = 16\nt_hop = 1\nv0 = 0.2\ngamma = 0.05\n[fermi]",
                                      "N = 12\nt_hop = 1\nv0 = 0.2\ngamma = 0.05\n[fermi]"),
                              "method = pole_sum\n"));
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("ERROR usage: identical reservoirs required"), std::string::npos) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST(CmdCurrent, OutputAndCorrelationDump) {
  TempDir dir;
  CommandOptions options;
  options.out_path = dir.path("out.csv");
  options.dump_correlations = dir.path("c.csv");
  const auto r = run(RunMode::SinglePoint, with_run(kSingleSite, "method = oracle_sylvester\n"), options);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "");
  std::ifstream out(options.out_path), dump(options.dump_correlations);
  std::stringstream a, b;
  a << out.rdbuf();
  b << dump.rdbuf();
  EXPECT_EQ(data_rows(a.str()).size(), 1u);
  const std::string dumped = b.str();
  EXPECT_EQ(dumped.substr(0, 14), "row,col,re,im\n");
  EXPECT_EQ(std::count(dumped.begin(), dumped.end(), '\n'), 1 + 33 * 33);
}

TEST(CmdValidate, SymmetricJunctionPasses) {
  const auto r = run(RunMode::Validate, with_run(kSingleSite, "validate = true\n"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("random_junctions,PASS"), std::string::npos);
}

TEST(CmdValidate, CorruptedHermiticityExits3) {
  const auto r = run(RunMode::Validate, with_run(kSingleSite, "validate = true\ndebug_corrupt_hermiticity = true\n"));
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("ERROR validation: check hermiticity failed"), std::string::npos) << r.err;
  EXPECT_NE(r.out.find("resolvent_identity,FAIL"), std::string::npos);
}

TEST(CmdValidate, UnequalLeadsSkipIdenticalIdentity) {
  const auto r = run(RunMode::Validate,
                     with_run(replace(kSingleSite, "N = 16\nt_hop = 1\nv0 = 0.2\ngamma = 0.05\n[fermi]",
                                      "N = 10\nt_hop = 1.2\nv0 = 0.3\ngamma = 0.1\n[fermi]"),
                              "method = all\n"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("identical_reservoir_identity,skipped (precondition)"), std::string::npos) << r.out;
}

TEST(CmdValidate, SeedChangesRandomJunctions) {
  CommandOptions a, b;
  a.seed = 1;
  b.seed = 2;
  const std::string text = with_run(kSingleSite, "validate = true\nrandom_junctions = 2\n");
  const auto ra = run(RunMode::Validate, text, a);
  const auto rb = run(RunMode::Validate, text, b);
  EXPECT_EQ(ra.code, 0);
  EXPECT_EQ(rb.code, 0);
  EXPECT_NE(ra.out, rb.out);
}

TEST(CmdSweep, ThreePointGammaSweep) {
  const auto r = run(RunMode::Sweep, with_run(kSingleSite, "sweep = gamma\nsweep_values = 0.01,0.1,1\nsweep_methods = pole_sum\n"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "gamma");
  EXPECT_EQ(rows[2][1], "1");
  EXPECT_NE(r.out.find(std::string(kCsvHeader) + "\n"), std::string::npos);
}

TEST(CmdSweep, UnsolvableCellIsIsolated) {
  const auto r = run(RunMode::Sweep,
                     with_run(kSingleSite, "sweep = gamma\nsweep_values = 1e-300,0.01,0.1\nsweep_methods = trace_integral\n"));
  EXPECT_EQ(r.code, kExitNumerical);
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][3], "");
  EXPECT_NE(rows[0][7].find("accuracy"), std::string::npos);
  EXPECT_FALSE(rows[1][3].empty());
  EXPECT_FALSE(rows[2][3].empty());
  EXPECT_NE(r.err.find("ERROR accuracy:"), std::string::npos);
}

TEST(CmdSweep, NonMonotoneValuesAreUsageError) {
  const auto r = run(RunMode::Sweep, with_run(kSingleSite, "sweep = gamma\nsweep_values = 0.1,0.3,0.2\nsweep_methods = pole_sum\n"));
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(CmdSweep, DeterministicAcrossJobs) {
  const std::string text =
      with_run(kSingleSite, "sweep = gamma\nsweep_values = 0.01,0.03,0.1,0.3,1\nsweep_methods = all\n");
  CommandOptions one, four;
  four.jobs = 4;
  const auto a = run(RunMode::Sweep, text, one);
  const auto b = run(RunMode::Sweep, text, four);
  const auto c = run(RunMode::Sweep, text, four);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
}

TEST(CmdConverge, LandauerErrorShrinksBeyond64) {
  const auto r = run(RunMode::Convergence,
                     with_run(replace_all(kSingleSite, "N = 16", "N = 32"), "converge_N = 32,64,128,256,512\n"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 10u);
  for (const char* method : {"pole_sum", "nonmarkovian"}) {
    std::vector<double> err;
    for (const auto& row : rows)
      if (row[2] == method) err.push_back(std::stod(row.back()));
    ASSERT_EQ(err.size(), 5u);
    for (std::size_t i = 2; i < err.size(); ++i) EXPECT_LT(err[i], err[i - 1]) << method;
  }
  EXPECT_NE(r.out.find("landauer_rel_err"), std::string::npos);
}

TEST(ExitCodes, Exhaustive) {
  std::ostringstream out, err;
  CommandOptions missing;
  missing.config_path = "/nonexistent/dlvn.ini";
  EXPECT_EQ(run_command(RunMode::SinglePoint, missing, out, err), kExitUsage);
  EXPECT_EQ(run(RunMode::SinglePoint, "[system]\neps0 = x\n").code, kExitUsage);
  EXPECT_EQ(run(RunMode::Sweep, with_run(kSingleSite, "method = all\n")).code, kExitUsage);
  EXPECT_EQ(run(RunMode::SinglePoint, with_run(kSingleSite, "method = all\n")).code, kExitOk);
  EXPECT_EQ(run(RunMode::SinglePoint, with_run(replace(kSingleSite, "[fermi]", "[quadrature]\nmax_panels = 2\n[fermi]"),
                                               "method = trace_integral\n"))
                .code,
            kExitNumerical);
  EXPECT_EQ(run(RunMode::Validate, with_run(kSingleSite, "validate = true\ndebug_corrupt_hermiticity = true\n")).code,
            kExitValidation);
  CommandOptions bad_jobs;
  bad_jobs.jobs = 0;
  EXPECT_EQ(run(RunMode::Sweep, with_run(kSingleSite, "method = all\n"), bad_jobs).code, kExitUsage);
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  SweepCell cell;
  cell.method = CurrentMethod::PoleSum;
  cell.value = 0.1;
  EXPECT_EQ(csv_row("gamma", 2.0, cell), "gamma,2,pole_sum,0.1,,,,");
}

}  // namespace
}  // namespace dlvn::cli

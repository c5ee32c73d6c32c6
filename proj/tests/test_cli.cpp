// Copyright 2026 The cghzsim Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cghz/analysis.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return "/tmp/cghz_cli_test_" + std::to_string(::getpid()) + "_" + tag + "_" +
         std::to_string(counter++);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the command-line tool with `args`, capturing combined output and the
// exit code. `env` is prepended verbatim (e.g. "VAR=1 ").
CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string capture = temp_path("out");
  const std::string cmd =
      env + std::string(CGHZ_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.output = slurp(capture);
  std::remove(capture.c_str());
  return r;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("run subcommand reports a concentration instance") {
  const auto r = run_cli("run --m 2 --n 2 --alpha 0.6");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("analytic success probability") != std::string::npos);
  CHECK(r.output.find("0.1152") != std::string::npos);
  CHECK(r.output.find("invariants hold:               yes") != std::string::npos);
}

TEST_CASE("run subcommand emits machine-readable JSON on request") {
  const auto r = run_cli("run --m 2 --n 2 --alpha 0.6 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"p_simulated\"") != std::string::npos);
  CHECK(r.output.find("\"outcomes\"") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("run --m 2 --n 2 --alpha 1.5").exit_code == 2);
  CHECK(run_cli("run --m 2 --n 2 --alpha 1.0").exit_code == 2);   // degenerate
  CHECK(run_cli("run --m 2 --n 2 --alpha 0.6 --no-such-flag").exit_code == 2);
  CHECK(run_cli("run --m 2 --n 2 --alpha 0.6 --format csv").exit_code == 2);
  CHECK(run_cli("sweep --alphas ''").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("desk-scale cap exits with code 3 and is adjustable by environment") {
  CHECK(run_cli("run --m 4 --n 3 --alpha 0.6").exit_code == 3);
  const auto r = run_cli("run --m 2 --n 2 --alpha 0.6", "CGHZ_MAX_MN=3 ");
  CHECK(r.exit_code == 3);
}

TEST_CASE("unwritable output paths exit with code 4") {
  CHECK(run_cli("run --m 2 --n 2 --alpha 0.6 --out /no/such/dir/x.txt").exit_code == 4);
}

TEST_CASE("sweep writes the fixed-schema table") {
  const std::string csv = temp_path("csv");
  const auto r = run_cli("sweep --m-values 2 --n-values 2 --alphas 0.3,0.7 --out " + csv);
  CHECK(r.exit_code == 0);
  const std::string text = slurp(csv);
  std::remove(csv.c_str());

  CHECK(text.rfind("m,N,alpha,p_analytic,p_simulated,abs_error,min_fidelity,runtime_ms\n",
                   0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(count_occurrences(text, "\n") == 3);  // header + two data rows
  CHECK(text.find("2,2,0.29999999999999999,") != std::string::npos);
  CHECK(text.find("2,2,0.69999999999999996,") != std::string::npos);
}

TEST_CASE("sweep JSON output parses back into identical rows") {
  const std::string path = temp_path("json");
  const auto r = run_cli(
      "sweep --m-values 2,3 --n-values 2 --alphas 0.5 --format json --out " + path);
  CHECK(r.exit_code == 0);

  std::ifstream in(path);
  REQUIRE(in.good());
  const auto parsed = cghz::parse_sweep_json(in);
  std::remove(path.c_str());

  cghz::SweepSpec spec;
  spec.m_values = {2, 3};
  spec.n_values = {2};
  spec.alphas = {0.5};
  const auto direct = cghz::run_sweep(spec);
  REQUIRE(parsed.size() == direct.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].m == direct[i].m);
    CHECK(parsed[i].N == direct[i].N);
    CHECK(parsed[i].alpha == direct[i].alpha);
    CHECK(parsed[i].p_analytic == direct[i].p_analytic);
    CHECK(parsed[i].p_simulated == direct[i].p_simulated);
  }
}

TEST_CASE("sweep marks over-cap rows as skipped comments") {
  const auto r = run_cli("sweep --m-values 2,5 --n-values 2 --alphas 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("# skipped m=5 N=2 alpha=0.5:") != std::string::npos);
}

TEST_CASE("configuration files supply defaults that flags override") {
  const std::string cfg = temp_path("cfg");
  {
    std::ofstream out(cfg);
    out << "# concentration instance\n"
        << "m = 2\n"
        << "n = 2\n"
        << "alpha = 0.6\n";
  }

  const auto from_config = run_cli("run --config " + cfg);
  CHECK(from_config.exit_code == 0);
  CHECK(from_config.output.find("0.1152") != std::string::npos);

  const auto overridden = run_cli("run --config " + cfg + " --alpha 0.70710678118654752");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.output.find("0.125") != std::string::npos);
  CHECK(overridden.output.find("0.1152") == std::string::npos);

  {
    std::ofstream out(cfg, std::ios::app);
    out << "mystery = 1\n";
  }
  CHECK(run_cli("run --config " + cfg).exit_code == 2);
  std::remove(cfg.c_str());

  CHECK(run_cli("run --config /no/such/config").exit_code == 4);
}

TEST_CASE("trace prints the requested pipeline stage") {
  const auto prepared = run_cli("trace --m 2 --n 2 --alpha 0.6 --stage prepared");
  CHECK(prepared.exit_code == 0);
  CHECK(prepared.output.find("copy 1 (4 terms):") != std::string::npos);
  CHECK(prepared.output.find("copy 2 (4 terms):") != std::string::npos);

  const auto hwp = run_cli("trace --m 2 --n 2 --alpha 0.6 --stage hwp");
  CHECK(hwp.exit_code == 0);
  CHECK(hwp.output.find("after the wave-plate layer (64 terms)") != std::string::npos);
  CHECK(count_occurrences(hwp.output, "|") >= 64 * 8);  // eight photons per ket

  const auto post = run_cli("trace --m 2 --n 2 --alpha 0.6 --stage postselect");
  CHECK(post.exit_code == 0);
  CHECK(post.output.find("coincidence probability: 0.1152") != std::string::npos);
  CHECK(post.output.find("kept state, normalized (8 terms)") != std::string::npos);

  const auto measured = run_cli("trace --m 2 --n 2 --alpha 0.6 --stage measured");
  CHECK(measured.exit_code == 0);
  CHECK(measured.output.find("detector patterns (16):") != std::string::npos);
  CHECK(measured.output.find("++++") != std::string::npos);

  CHECK(run_cli("trace --m 2 --n 2 --alpha 0.6 --stage bogus").exit_code == 2);
}

TEST_CASE("verification command reports every check") {
  const auto r = run_cli("verify --quick");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all checks passed") != std::string::npos);
  CHECK(count_occurrences(r.output, "PASS") >= 8);
  CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("verification catches a seeded routing defect") {
  const auto r = run_cli("verify --quick", "CGHZ_TEST_PERTURB_PBS=1 ");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("FAIL") != std::string::npos);
  CHECK(r.output.find("some checks FAILED") != std::string::npos);
}

TEST_CASE("serial flag yields byte-identical sweep output") {
  const std::string a = temp_path("par");
  const std::string b = temp_path("ser");
  CHECK(run_cli("sweep --m-values 2 --n-values 2,3 --alphas 0.25,0.75 --out " + a)
            .exit_code == 0);
  CHECK(run_cli("--serial sweep --m-values 2 --n-values 2,3 --alphas 0.25,0.75 --out " + b)
            .exit_code == 0);
  std::string ta = slurp(a);
  std::string tb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  // Runtimes differ run to run; strip the last column before comparing.
  auto strip_runtime = [](std::string text) {
    std::istringstream is(text);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
      const auto cut = line.rfind(',');
      os << (cut == std::string::npos ? line : line.substr(0, cut)) << "\n";
    }
    return os.str();
  };
  CHECK(strip_runtime(ta) == strip_runtime(tb));
  CHECK(ta.rfind("m,N,", 0) == 0);
}

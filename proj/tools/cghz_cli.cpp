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

// Command-line frontend: exact simulation runs, parameter sweeps, built-in
// self-checks, and stage-by-stage state traces.
//
// Exit codes: 0 success, 1 failed check/invariant, 2 invalid usage or
// parameters, 3 problem size above the configured cap, 4 I/O failure.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cghz/analysis.hpp"
#include "cghz/execution.hpp"
#include "cghz/measurement.hpp"
#include "cghz/optics.hpp"
#include "cghz/protocol.hpp"
#include "cghz/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_complex(cghz::cplx z) {
  if (z.imag() == 0.0) return fmt17(z.real());
  return fmt17(z.real()) + (z.imag() < 0 ? "" : "+") + fmt17(z.imag()) + "i";
}

std::string correction_string(const std::vector<cghz::CircuitElement>& ops) {
  if (ops.empty()) return "(none)";
  std::string out;
  for (const auto& op : ops) {
    if (!out.empty()) out += ' ';
    out += cghz::to_string(op);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config files: flat "key = value" lines, '#' comments, no sections.
// Command-line flags take precedence over config values.

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!kv.emplace(key, value).second) {
      throw UsageError(path + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': not a number: " + value);
  }
  if (pos != value.size()) {
    throw UsageError("config key '" + key + "': not a number: " + value);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(value, &pos);
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': not an integer: " + value);
  }
  if (pos != value.size()) {
    throw UsageError("config key '" + key + "': not an integer: " + value);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("config key '" + key + "': not a boolean: " + value);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

// ---------------------------------------------------------------------------

// Either stdout or a named file; a file that cannot be opened or written is
// an I/O failure.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);  // keep LF endings everywhere
      if (!file_) throw IoError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }
  void finish() {
    stream().flush();
    if (!path_.empty() && !file_.good()) {
      throw IoError("failed writing '" + path_ + "'");
    }
  }

 private:
  std::string path_;
  std::ofstream file_;
};

struct StateOptions {
  int m = 2;
  int N = 2;
  std::optional<double> alpha;
  std::optional<double> alpha_re;
  std::optional<double> alpha_im;
};

// Resolves the --alpha / --alpha-re / --alpha-im inputs into protocol
// parameters; enforces 0 < |alpha| < 1 strictly.
cghz::CghzParams resolve_params(const StateOptions& o) {
  const bool has_complex = o.alpha_re.has_value() || o.alpha_im.has_value();
  if (o.alpha.has_value() && has_complex) {
    throw UsageError("alpha cannot be combined with alpha-re/alpha-im");
  }
  cghz::cplx alpha;
  if (has_complex) {
    alpha = cghz::cplx(o.alpha_re.value_or(0.0), o.alpha_im.value_or(0.0));
  } else {
    alpha = cghz::cplx(o.alpha.value_or(1.0 / std::sqrt(2.0)), 0.0);
  }
  const double mag = std::abs(alpha);
  if (!(mag > 0.0) || !(mag < 1.0)) {
    throw UsageError("|alpha| must lie strictly inside (0, 1)");
  }
  return cghz::CghzParams::complex_alpha(o.m, o.N, alpha);
}

void print_report_text(std::ostream& os, const cghz::EcpReport& r) {
  os << "m=" << r.params.m << " N=" << r.params.N
     << " alpha=" << fmt_complex(r.params.alpha)
     << " beta=" << fmt_complex(r.params.beta) << "\n";
  os << "analytic success probability:  " << fmt17(r.analytic_probability)
     << "\n";
  os << "simulated success probability: " << fmt17(r.success_probability)
     << "\n";
  os << "absolute error:                " << fmt17(r.abs_error()) << "\n";
  os << "min output fidelity:           " << fmt17(r.min_fidelity) << "\n";
  os << "detector patterns kept:        " << r.outcomes.size() << "\n";
  os << "invariants hold:               "
     << (r.invariants_hold() ? "yes" : "no") << "\n";
  if (!r.outcomes.empty()) {
    os << "outcomes:\n";
    for (const auto& o : r.outcomes) {
      os << "  " << o.pattern.compact() << "  p=" << fmt17(o.probability)
         << "  fidelity=" << fmt17(o.fidelity)
         << "  correction: " << correction_string(o.correction) << "\n";
    }
  }
}

nlohmann::ordered_json report_to_json(const cghz::EcpReport& r) {
  nlohmann::ordered_json j;
  j["m"] = r.params.m;
  j["N"] = r.params.N;
  j["alpha"] = {{"re", r.params.alpha.real()}, {"im", r.params.alpha.imag()}};
  j["beta"] = {{"re", r.params.beta.real()}, {"im", r.params.beta.imag()}};
  j["p_analytic"] = r.analytic_probability;
  j["p_simulated"] = r.success_probability;
  j["abs_error"] = r.abs_error();
  j["min_fidelity"] = r.min_fidelity;
  j["invariants_hold"] = r.invariants_hold();
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (const auto& o : r.outcomes) {
    nlohmann::ordered_json jo;
    jo["pattern"] = o.pattern.compact();
    jo["probability"] = o.probability;
    jo["fidelity"] = o.fidelity;
    std::vector<std::string> ops;
    for (const auto& op : o.correction) ops.push_back(cghz::to_string(op));
    jo["correction"] = ops;
    outcomes.push_back(std::move(jo));
  }
  j["outcomes"] = std::move(outcomes);
  return j;
}

int cmd_run(const StateOptions& state, const std::string& format,
            const std::string& out_path) {
  if (format != "text" && format != "json") {
    throw UsageError("run reports support --format text or json");
  }
  const cghz::CghzParams params = resolve_params(state);
  const cghz::EcpReport report = cghz::run_ecp(params);
  OutputTarget out(out_path);
  if (format == "json") {
    out.stream() << report_to_json(report).dump(2) << "\n";
  } else {
    print_report_text(out.stream(), report);
  }
  out.finish();
  return report.invariants_hold() ? kExitOk : kExitCheckFailed;
}

int cmd_trace(const StateOptions& state, const std::string& stage,
              const std::string& format, const std::string& out_path) {
  if (format != "text") throw UsageError("trace output is text only");
  const bool known_stage = stage == "prepared" || stage == "hwp" ||
                           stage == "pbs" || stage == "postselect" ||
                           stage == "measured";
  if (!known_stage) {
    throw UsageError(
        "stage must be one of prepared, hwp, pbs, postselect, measured");
  }
  const cghz::CghzParams params = resolve_params(state);
  const cghz::ModeLayout layout = cghz::ecp_mode_layout(params.m, params.N);
  OutputTarget out(out_path);
  std::ostream& os = out.stream();

  const cghz::PhotonState copy1 = cghz::c_ghz_state(params, layout.copy1);
  const cghz::PhotonState copy2 = cghz::swapped_copy(params, layout.copy2);
  if (stage == "prepared") {
    os << "copy 1 (" << copy1.terms().size() << " terms):\n"
       << cghz::to_string(copy1);
    os << "copy 2 (" << copy2.terms().size() << " terms):\n"
       << cghz::to_string(copy2);
  } else if (stage == "hwp") {
    cghz::PhotonState joint = cghz::tensor(copy1, copy2);
    joint = cghz::hwp_layer(joint, layout.copy1_flat());
    joint = cghz::hwp_layer(joint, layout.copy2_flat());
    os << "after the wave-plate layer (" << joint.terms().size()
       << " terms):\n"
       << cghz::to_string(joint);
  } else if (stage == "pbs" || stage == "postselect") {
    const cghz::EcpCircuit net = cghz::build_ecp_circuit(params);
    const cghz::PhotonState routed =
        cghz::apply_circuit(cghz::tensor(copy1, copy2), net.circuit);
    if (stage == "pbs") {
      os << "after the beam-splitter layer (" << routed.terms().size()
         << " terms):\n"
         << cghz::to_string(routed);
    } else {
      const auto [kept, prob] = cghz::post_select(routed, net.rule);
      os << "coincidence probability: " << fmt17(prob) << "\n";
      if (prob > 0.0) {
        os << "kept state, normalized (" << kept.terms().size()
           << " terms):\n"
           << cghz::to_string(cghz::normalize(kept).first);
      }
    }
  } else {  // measured
    const cghz::EcpReport report = cghz::run_ecp(params);
    os << "detector patterns (" << report.outcomes.size() << "):\n";
    for (const auto& o : report.outcomes) {
      os << "  " << o.pattern.compact() << "  p=" << fmt17(o.probability)
         << "  correction: " << correction_string(o.correction) << "\n";
    }
  }
  out.finish();
  return kExitOk;
}

int cmd_sweep(const cghz::SweepSpec& spec, const std::string& format,
              const std::string& out_path) {
  if (format != "csv" && format != "json") {
    throw UsageError("sweep tables support --format csv or json");
  }
  const std::vector<cghz::SweepRow> rows = cghz::run_sweep(spec);
  OutputTarget out(out_path);
  if (format == "json") {
    cghz::write_sweep_json(out.stream(), rows);
  } else {
    cghz::write_sweep_csv(out.stream(), rows);
  }
  out.finish();
  return kExitOk;
}

int cmd_verify(bool quick) {
  const std::vector<cghz::VerifyCheck> checks = cghz::run_verification(quick);
  bool all_pass = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << " -- "
              << c.detail << "\n";
    all_pass = all_pass && c.pass;
  }
  std::cout << (all_pass ? "all checks passed" : "some checks FAILED")
            << "\n";
  return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact simulator of linear-optics entanglement concentration for "
      "concatenated multi-photon states"};
  app.require_subcommand(1);

  bool serial = false;
  app.add_flag("--serial", serial,
               "run all kernels on a single thread (results are identical)");

  StateOptions state;
  std::string format;
  std::string out_path;
  std::string stage;
  std::string config_path;
  bool quick = false;

  cghz::SweepSpec spec = cghz::SweepSpec::default_spec();
  std::vector<int> sweep_m, sweep_n;
  std::vector<double> sweep_alphas;
  int alpha_count = 0;

  // Config key -> every flag that can override it (run and trace both
  // expose m/n/alpha flags; at most one subcommand parses).
  std::map<std::string, std::vector<CLI::Option*>> bound;

  const auto bind = [&bound](const std::string& key, CLI::Option* opt) {
    bound[key].push_back(opt);
  };

  const auto add_state_options = [&](CLI::App* cmd) {
    bind("m", cmd->add_option("--m", state.m,
                              "photons per logic qubit (>= 2)"));
    bind("n", cmd->add_option("--n,--N", state.N,
                              "logic qubits per copy (>= 2)"));
    bind("alpha", cmd->add_option("--alpha", state.alpha,
                                  "real input coefficient in (0, 1)"));
    bind("alpha-re",
         cmd->add_option("--alpha-re", state.alpha_re,
                         "real part of a complex input coefficient"));
    bind("alpha-im",
         cmd->add_option("--alpha-im", state.alpha_im,
                         "imaginary part of a complex input coefficient"));
    cmd->add_option("--config", config_path,
                    "flat key = value file; flags take precedence");
    bind("out",
         cmd->add_option("--out", out_path, "write output to this file"));
  };

  CLI::App* run = app.add_subcommand(
      "run", "simulate one protocol instance and report probabilities");
  add_state_options(run);
  bind("format", run->add_option("--format", format, "text or json"));

  CLI::App* trace = app.add_subcommand(
      "trace", "print the exact state after one pipeline stage");
  add_state_options(trace);
  bind("stage",
       trace->add_option("--stage", stage,
                         "prepared, hwp, pbs, postselect, or measured"));

  CLI::App* sweep = app.add_subcommand(
      "sweep", "tabulate probabilities over a parameter grid");
  bind("m-values",
       sweep->add_option("--m-values", sweep_m, "grid of m values")
           ->delimiter(','));
  bind("n-values",
       sweep->add_option("--n-values", sweep_n, "grid of N values")
           ->delimiter(','));
  bind("alphas",
       sweep->add_option("--alphas", sweep_alphas, "explicit alpha grid")
           ->delimiter(','));
  bind("alpha-count",
       sweep->add_option(
           "--alpha-count", alpha_count,
           "equidistant interior alpha grid with this many points"));
  sweep->add_option("--config", config_path,
                    "flat key = value file; flags take precedence");
  bind("format", sweep->add_option("--format", format, "csv or json"));
  bind("out",
       sweep->add_option("--out", out_path, "write the table to this file"));

  CLI::App* verify =
      app.add_subcommand("verify", "run the built-in self-check suite");
  verify->add_flag("--quick", quick, "trimmed grids, sub-second run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    // Merge config values under any flags given on the command line.
    bool config_alphas = false;
    bool config_alpha_count = false;
    const auto given = [&bound](const std::string& key) {
      const auto it = bound.find(key);
      if (it == bound.end()) return false;
      for (const CLI::Option* opt : it->second) {
        if (opt->count() > 0) return true;
      }
      return false;
    };
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_config_file(config_path)) {
        if (key == "m") {
          if (!given("m")) state.m = parse_int(key, value);
        } else if (key == "n") {
          if (!given("n")) state.N = parse_int(key, value);
        } else if (key == "alpha") {
          if (!given("alpha")) state.alpha = parse_double(key, value);
        } else if (key == "alpha-re") {
          if (!given("alpha-re")) state.alpha_re = parse_double(key, value);
        } else if (key == "alpha-im") {
          if (!given("alpha-im")) state.alpha_im = parse_double(key, value);
        } else if (key == "stage") {
          if (!given("stage")) stage = value;
        } else if (key == "format") {
          if (!given("format")) format = value;
        } else if (key == "out") {
          if (!given("out")) out_path = value;
        } else if (key == "serial") {
          if (!serial) serial = parse_bool(key, value);
        } else if (key == "quick") {
          if (!quick) quick = parse_bool(key, value);
        } else if (key == "m-values") {
          if (!given("m-values")) {
            sweep_m.clear();
            for (const auto& v : split_list(value)) {
              sweep_m.push_back(parse_int(key, v));
            }
          }
        } else if (key == "n-values") {
          if (!given("n-values")) {
            sweep_n.clear();
            for (const auto& v : split_list(value)) {
              sweep_n.push_back(parse_int(key, v));
            }
          }
        } else if (key == "alphas") {
          if (!given("alphas")) {
            sweep_alphas.clear();
            for (const auto& v : split_list(value)) {
              sweep_alphas.push_back(parse_double(key, v));
            }
            config_alphas = true;
          }
        } else if (key == "alpha-count") {
          if (!given("alpha-count")) {
            alpha_count = parse_int(key, value);
            config_alpha_count = true;
          }
        } else {
          throw UsageError("unknown config key '" + key + "'");
        }
      }
    }

    if (serial) cghz::set_execution(cghz::Exec::Serial);

    if (run->parsed()) {
      if (format.empty()) format = "text";
      return cmd_run(state, format, out_path);
    }
    if (trace->parsed()) {
      if (format.empty()) format = "text";
      if (stage.empty()) {
        throw UsageError("trace requires --stage (or a stage config key)");
      }
      return cmd_trace(state, stage, format, out_path);
    }
    if (sweep->parsed()) {
      if (format.empty()) format = "csv";
      const bool alphas_given = given("alphas") || config_alphas;
      const bool count_given = given("alpha-count") || config_alpha_count;
      if (alphas_given && count_given) {
        throw UsageError("choose either alphas or alpha-count, not both");
      }
      if (!sweep_m.empty()) spec.m_values = sweep_m;
      if (!sweep_n.empty()) spec.n_values = sweep_n;
      if (count_given) {
        spec.alphas = cghz::SweepSpec::alpha_grid(alpha_count);
      } else if (alphas_given) {
        spec.alphas = sweep_alphas;
      }
      return cmd_sweep(spec, format, out_path);
    }
    return cmd_verify(quick);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cghz::CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cghz::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

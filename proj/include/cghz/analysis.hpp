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

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cghz/protocol.hpp"

namespace cghz {

// Result of the brute-force enumeration oracle: success probability, the
// probability kept by post-selection, and per-detector-pattern
// probabilities keyed by sign string (measurement order).
struct OracleResult {
  double success_probability = 0.0;
  double post_select_probability = 0.0;
  std::map<std::string, double> pattern_probabilities;
};

// Independent cross-check path: expands the two copies ket-by-ket from the
// closed product form, routes each ket through the beam-splitter rule by
// direct photon counting, filters one-photon-per-mode coincidences and sums
// detector amplitudes per sign pattern. Shares only the mode-naming scheme
// with the state-vector engine. Limited to m*N <= 6 (CapError above).
OracleResult oracle_enumerate(const CghzParams& p);

// Closed-form expansions of the two checkpoint states of the m = N = 2
// instance, written out term-by-term (no circuit evaluation): the joint
// state of both copies after the HWP layer, and the normalized state kept
// by post-selection. Used as regression baselines for the engine.
PhotonState reference_posthwp_22(const CghzParams& p);
PhotonState reference_postselected_22(const CghzParams& p);

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepSpec {
  std::vector<int> m_values{2, 3};
  std::vector<int> n_values{2, 3};
  std::vector<double> alphas;  // strictly inside (0, 1)

  // count equidistant interior points i/(count+1), i = 1..count.
  static std::vector<double> alpha_grid(int count);
  static SweepSpec default_spec();
};

struct SweepRow {
  int m = 0;
  int N = 0;
  double alpha = 0.0;
  double p_analytic = 0.0;
  double p_simulated = 0.0;
  double abs_error = 0.0;
  double min_fidelity = 0.0;
  double runtime_ms = 0.0;
  bool skipped = false;
  std::string skip_reason;
};

// One row per (m, N, alpha), ordered lexicographically ascending. Rows whose
// m*N exceeds the cap are marked skipped rather than failing the sweep. All
// columns except runtime_ms are deterministic across runs.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Fixed-schema CSV: header "m,N,alpha,p_analytic,p_simulated,abs_error,
// min_fidelity,runtime_ms", floats at 17 significant digits, LF line
// endings. Skipped rows become "# skipped ..." comment lines.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// JSON array of row objects (same field names); skipped rows carry a
// "skipped" reason string. parse_sweep_json inverts write_sweep_json.
void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_json(std::istream& is);

}  // namespace cghz

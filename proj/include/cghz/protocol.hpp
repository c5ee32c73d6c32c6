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

#include <string>
#include <vector>

#include "cghz/fock.hpp"
#include "cghz/measurement.hpp"
#include "cghz/optics.hpp"

namespace cghz {

// Parameters of one concentration instance: N logic qubits, each encoded in
// an m-photon GHZ block, input coefficients (alpha, beta) with
// |alpha|^2 + |beta|^2 = 1.
struct CghzParams {
  int m = 2;
  int N = 2;
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};

  // Validates m, N >= 2, normalization to 1e-12 and the desk-scale cap
  // (m*N <= desk_cap(), CapError beyond it).
  static CghzParams make(int m, int N, cplx alpha, cplx beta);
  // beta = sqrt(1 - alpha^2) for real alpha in [0, 1].
  static CghzParams real_alpha(int m, int N, double alpha);
  // Complex alpha with |alpha| <= 1; beta = sqrt(1 - |alpha|^2) real.
  static CghzParams complex_alpha(int m, int N, cplx alpha);
};

// Spatial-mode naming for a protocol instance: copy[c][j][k] is photon k of
// logic qubit j of copy c. Generic labels are "q{j}p{k}c{1|2}"; the two
// instances whose mode letters are conventional in the literature
// (m = N = 2 and m = 3, N = 2) use those letters (a1, c1, b1, d1, ...).
struct ModeLayout {
  std::vector<std::vector<std::string>> copy1;  // [logic qubit][photon]
  std::vector<std::vector<std::string>> copy2;
  std::vector<std::string> copy1_flat() const;
  std::vector<std::string> copy2_flat() const;
};

ModeLayout ecp_mode_layout(int m, int N);

// m-photon GHZ state (|H...H> + sign |V...V>)/sqrt2 over the given spatial
// labels (one photon per label).
PhotonState ghz_state(int m, Sign sign, const std::vector<std::string>& labels);

// alpha * (GHZ+)^(x)N + beta * (GHZ-)^(x)N over labels[j][k]; normalized for
// any admissible (alpha, beta).
PhotonState c_ghz_state(const CghzParams& p,
                        const std::vector<std::vector<std::string>>& labels);

// The coefficient-swapped second copy: constructed directly with (beta,
// alpha) and cross-checked against applying a phase flip to the first photon
// of every logic qubit of the (alpha, beta) state; the two must agree
// (internal consistency failure otherwise).
PhotonState swapped_copy(const CghzParams& p,
                         const std::vector<std::vector<std::string>>& labels);

// The maximally entangled target: ((GHZ+)^(x)N + (GHZ-)^(x)N)/sqrt2.
PhotonState target_state(const CghzParams& p,
                         const std::vector<std::vector<std::string>>& labels);

// Closed-form success probability |alpha*beta|^2 / 2^((m-1)N - 1).
double analytic_success(const CghzParams& p);

struct EcpCircuit {
  Circuit circuit;             // HWP layer on all photons, then the PBS layer
  PostSelectionRule rule;      // every output mode holds exactly one photon
  std::vector<std::string> measured;  // copy-2 modes read out in the +/- basis
};

// The concentration network for p: one HWP per photon (both copies), one PBS
// per (logic qubit, photon slot) pairing the copies, the
// one-photon-per-output rule over all 2mN modes, and the copy-2 measurement
// list. Construction is independent of alpha.
EcpCircuit build_ecp_circuit(const CghzParams& p);

// One post-selected detector pattern: its absolute probability, the copy-1
// state after the pattern's correction and the output HWP layer, and that
// state's fidelity against the target.
struct EcpOutcome {
  DetectionPattern pattern;
  double probability;
  std::vector<CircuitElement> correction;
  PhotonState corrected_state;
  double fidelity;
};

struct EcpReport {
  CghzParams params;
  double success_probability = 0.0;  // sum of outcome probabilities
  double analytic_probability = 0.0;
  double min_fidelity = 1.0;  // 1 for an empty outcome set
  std::vector<EcpOutcome> outcomes;

  double abs_error() const;
  // |simulated - analytic| <= 1e-9 and every outcome at fidelity 1 +- 1e-9.
  bool invariants_hold() const;
};

// Runs the full pipeline exactly: prepare both copies, tensor, HWP layer,
// PBS layer, post-select, enumerate +/- patterns, correct each pattern, apply
// the output HWP layer, compute fidelities. Degenerate inputs (alpha in
// {0, 1}) yield an empty outcome set with success probability 0.
EcpReport run_ecp(const CghzParams& p);

// Applies one HWP per listed spatial label.
PhotonState hwp_layer(const PhotonState& s, const std::vector<std::string>& labels);

}  // namespace cghz

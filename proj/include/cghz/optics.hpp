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

namespace cghz {

enum class ElementKind { Hwp, Pbs, PhaseFlip, BitFlip };

// One linear-optical element. `labels` holds the spatial labels it acts on:
// one label for Hwp/PhaseFlip/BitFlip, four (in1, in2, out1, out2) for Pbs.
struct CircuitElement {
  ElementKind kind;
  std::vector<std::string> labels;
  bool operator==(const CircuitElement&) const = default;
};

CircuitElement hwp(const std::string& spatial);
CircuitElement pbs(const std::string& in1, const std::string& in2);
CircuitElement pbs(const std::string& in1, const std::string& in2, const std::string& out1,
                   const std::string& out2);
CircuitElement phase_flip(const std::string& spatial);
CircuitElement bit_flip(const std::string& spatial);

// Compact rendering, e.g. "HWP(a1)", "PBS(a1,a2)", "Z(c1)", "X(b1)".
std::string to_string(const CircuitElement& e);

struct Circuit {
  std::vector<CircuitElement> elements;
};

// Half-wave plate at 22.5 deg on both polarization modes of `spatial`:
// H -> (H + V)/sqrt2, V -> (H - V)/sqrt2. Exact bosonic combinatorics for
// multi-photon occupations (a2-photon input splits with the usual sqrt
// factors); output occupations past kMaxOccupancy raise OccupancyError.
PhotonState apply_hwp(const PhotonState& s, const std::string& spatial);

// Polarizing beam splitter: transmits H, reflects V, no reflection phase.
// Routing: (in1,H)->(out1,H), (in1,V)->(out2,V), (in2,H)->(out2,H),
// (in2,V)->(out1,V). Outputs either reuse the input labels (out1 = in1,
// out2 = in2) or are fresh labels replacing them in the registry.
PhotonState apply_pbs(const PhotonState& s, const std::string& in1, const std::string& in2);
PhotonState apply_pbs(const PhotonState& s, const std::string& in1, const std::string& in2,
                      const std::string& out1, const std::string& out2);

// Multiplies each ket by (-1)^(V occupation of `spatial`).
PhotonState apply_phase_flip(const PhotonState& s, const std::string& spatial);

// Swaps the H and V occupations of `spatial`.
PhotonState apply_bit_flip(const PhotonState& s, const std::string& spatial);

PhotonState apply_element(const PhotonState& s, const CircuitElement& e);
PhotonState apply_circuit(const PhotonState& s, const Circuit& c);

}  // namespace cghz

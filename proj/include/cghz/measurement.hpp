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
#include <utility>
#include <vector>

#include "cghz/fock.hpp"
#include "cghz/optics.hpp"

namespace cghz {

// Detector-count requirement: each listed spatial mode must hold exactly
// `count` photons (summed over both polarizations).
struct PostSelectionRule {
  std::vector<std::pair<std::string, int>> required;
};

enum class Sign : unsigned char { Plus = 0, Minus = 1 };

inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

// Outcome of diagonal-basis detectors, one sign per measured spatial mode,
// listed in measurement order.
struct DetectionPattern {
  std::vector<std::pair<std::string, Sign>> outcomes;
  // Signs only, e.g. "+-+-" (measurement order).
  std::string compact() const;
  bool operator==(const DetectionPattern&) const = default;
};

struct MeasurementResult {
  DetectionPattern pattern;
  double probability;     // relative to the squared norm of the input state
  PhotonState conditional;  // normalized residual state on the unmeasured modes
};

// Projects onto the photon-count pattern of `rule` and returns the kept part
// (unnormalized) plus its squared norm. Labels must be registered and listed
// at most once. A zero kept part is a valid result with probability 0.
std::pair<PhotonState, double> post_select(const PhotonState& s, const PostSelectionRule& rule);

// Measures each listed spatial mode in the |+> = (H+V)/sqrt2,
// |-> = (H-V)/sqrt2 basis, enumerating all 2^k sign patterns exactly. Every
// term must hold exactly one photon in each measured mode (PreconditionError
// otherwise; post-select first). Measured modes are removed from the
// registry of the conditional states. Only patterns with probability > 1e-12
// are returned, in lexicographic order with '+' before '-'. Probabilities
// sum to the squared norm of the input.
std::vector<MeasurementResult> measure_pm(const PhotonState& s,
                                          const std::vector<std::string>& spatials);

// Local corrections (phase/bit flips on the kept copy's photons) that map the
// conditional state of `pattern` onto the canonical concentrated form for an
// (m, N) protocol instance. Found by exhaustive search over flip
// compositions, smallest first, against a reference run; the table for each
// (m, N) is computed once and cached. PreconditionError when the pattern
// does not cover exactly the m*N measured modes of the second copy.
std::vector<CircuitElement> correction_for(const DetectionPattern& pattern, int m, int N);

}  // namespace cghz

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

#include "cghz/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "cghz/execution.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cghz {

namespace {
// Patterns whose squared amplitude falls below this are exact cancellations
// up to roundoff and are not reported.
constexpr double kProbabilityFloor = 1e-12;
}  // namespace

std::string DetectionPattern::compact() const {
  std::string s;
  s.reserve(outcomes.size());
  for (const auto& [label, sign] : outcomes) s.push_back(sign_char(sign));
  return s;
}

std::pair<PhotonState, double> post_select(const PhotonState& s, const PostSelectionRule& rule) {
  std::vector<std::pair<std::size_t, int>> checks;  // (H-mode index, required count)
  std::set<std::string> seen;
  checks.reserve(rule.required.size());
  for (const auto& [label, count] : rule.required) {
    if (!seen.insert(label).second)
      throw PreconditionError("post-selection rule lists label twice: " + label);
    if (count < 0) throw PreconditionError("negative photon count in post-selection rule");
    checks.emplace_back(s.registry().index_of(label, Pol::H), count);
  }
  std::vector<Term> kept;
  double prob = 0.0;
  for (const Term& t : s.terms()) {
    bool ok = true;
    for (const auto& [iH, count] : checks) {
      if (t.ket.occupation(iH) + t.ket.occupation(iH + 1) != count) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept.push_back(t);
      prob += std::norm(t.amp);
    }
  }
  return {PhotonState(s.registry(), std::move(kept)), prob};
}

std::vector<MeasurementResult> measure_pm(const PhotonState& s,
                                          const std::vector<std::string>& spatials) {
  const std::size_t k = spatials.size();
  if (k == 0) throw PreconditionError("no modes listed for measurement");
  if (k > 24) throw PreconditionError("measurement pattern enumeration limited to 24 modes");
  std::vector<std::size_t> iH(k);
  std::set<std::string> seen;
  for (std::size_t j = 0; j < k; ++j) {
    if (!seen.insert(spatials[j]).second)
      throw PreconditionError("measured label listed twice: " + spatials[j]);
    iH[j] = s.registry().index_of(spatials[j], Pol::H);
  }

  // Registry of the conditional states: everything but the measured modes.
  ModeRegistry reduced;
  std::vector<int> new_index(s.registry().size(), -1);
  for (const auto& label : s.registry().spatial_labels()) {
    if (seen.count(label)) continue;
    const std::size_t old = s.registry().index_of(label, Pol::H);
    const std::size_t fresh = reduced.register_spatial(label);
    new_index[old] = static_cast<int>(fresh);
    new_index[old + 1] = static_cast<int>(fresh) + 1;
  }

  // Per input term: residual ket and the set of measured modes holding V.
  struct Projected {
    FockBasisState residual;
    std::uint32_t v_mask;
    cplx amp;
  };
  std::vector<Projected> proj(s.terms().size());
  const double scale = std::pow(0.5, 0.5 * static_cast<double>(k));
  for (std::size_t t = 0; t < s.terms().size(); ++t) {
    const Term& term = s.terms()[t];
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const int h = term.ket.occupation(iH[j]);
      const int v = term.ket.occupation(iH[j] + 1);
      if (h + v != 1)
        throw PreconditionError("measured mode " + spatials[j] +
                                " does not hold exactly one photon; post-select first");
      if (v) mask |= (1u << j);
    }
    FockBasisState res;
    for (std::size_t m = 0; m < s.registry().size(); ++m) {
      if (new_index[m] < 0) continue;
      const int occ = term.ket.occupation(m);
      if (occ) res.set_occupation(static_cast<std::size_t>(new_index[m]), occ);
    }
    proj[t] = Projected{res, mask, term.amp * scale};
  }

  const std::size_t n_patterns = std::size_t{1} << k;
  std::vector<MeasurementResult> slots(n_patterns);
  std::vector<char> used(n_patterns, 0);

  auto eval_pattern = [&](std::size_t bits) {
    // bit j set = detector j fired '-'; amplitude sign from V photons at '-'.
    std::vector<Term> terms;
    terms.reserve(proj.size());
    for (const Projected& p : proj) {
      const bool neg = std::popcount(static_cast<std::uint32_t>(bits) & p.v_mask) % 2 != 0;
      terms.push_back(Term{p.residual, neg ? -p.amp : p.amp});
    }
    detail::canonicalize(terms);
    double prob = 0.0;
    for (const Term& t : terms) prob += std::norm(t.amp);
    if (prob <= kProbabilityFloor) return;
    const double inv = 1.0 / std::sqrt(prob);
    for (Term& t : terms) t.amp *= inv;
    DetectionPattern pat;
    pat.outcomes.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
      pat.outcomes.emplace_back(spatials[j], (bits >> j) & 1 ? Sign::Minus : Sign::Plus);
    slots[bits] = MeasurementResult{std::move(pat), prob, PhotonState(reduced, std::move(terms))};
    used[bits] = 1;
  };

#if defined(_OPENMP)
  if (execution() == Exec::Parallel && n_patterns > 1 && proj.size() > 64) {
#pragma omp parallel for schedule(dynamic)
    for (long long bits = 0; bits < static_cast<long long>(n_patterns); ++bits)
      eval_pattern(static_cast<std::size_t>(bits));
  } else
#endif
  {
    for (std::size_t bits = 0; bits < n_patterns; ++bits) eval_pattern(bits);
  }

  // Report patterns sorted by their sign string ('+' < '-', first listed
  // mode most significant).
  std::vector<std::size_t> order;
  order.reserve(n_patterns);
  for (std::size_t b = 0; b < n_patterns; ++b)
    if (used[b]) order.push_back(b);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return slots[a].pattern.compact() < slots[b].pattern.compact();
  });
  std::vector<MeasurementResult> out;
  out.reserve(order.size());
  for (const std::size_t b : order) out.push_back(std::move(slots[b]));
  return out;
}

}  // namespace cghz

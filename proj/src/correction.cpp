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
//
// Correction-table construction. For every detector pattern of an (m, N)
// instance the table holds the smallest composition of local flips on the
// kept copy that maps the pattern's conditional state onto the canonical
// concentrated form. Compositions are searched exhaustively (phase-flip
// subsets ordered by size, then compositions that add bit flips); nothing
// about the winning composition is assumed up front.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "cghz/execution.hpp"
#include "cghz/measurement.hpp"
#include "cghz/protocol.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cghz {

namespace {

constexpr double kFidelityTol = 1e-9;

// Paired amplitudes of the conditional and canonical states plus the V-photon
// bitmask of the ket over the kept copy's photon slots.
struct PairedTerm {
  cplx weight;  // conj(canonical amp) * conditional amp
  std::uint32_t v_mask;
};

std::vector<PairedTerm> pair_terms(const PhotonState& cond, const PhotonState& canon,
                                   const std::vector<std::size_t>& v_modes) {
  std::vector<PairedTerm> out;
  out.reserve(cond.terms().size());
  for (const Term& t : cond.terms()) {
    const cplx can = canon.amplitude(t.ket);
    std::uint32_t mask = 0;
    for (std::size_t b = 0; b < v_modes.size(); ++b)
      if (t.ket.occupation(v_modes[b])) mask |= (1u << b);
    out.push_back(PairedTerm{std::conj(can) * t.amp, mask});
  }
  return out;
}

// overlap(S) = sum_t weight_t * (-1)^popcount(v_mask_t & S) for every subset
// S at once, via a Walsh-Hadamard transform over the mask index.
std::vector<cplx> all_phase_overlaps(const std::vector<PairedTerm>& paired, int n_bits) {
  std::vector<cplx> a(std::size_t{1} << n_bits, cplx{0.0, 0.0});
  for (const PairedTerm& t : paired) a[t.v_mask] += t.weight;
  for (int b = 0; b < n_bits; ++b) {
    const std::size_t half = std::size_t{1} << b;
    for (std::size_t i = 0; i < a.size(); i += half * 2) {
      for (std::size_t j = i; j < i + half; ++j) {
        const cplx x = a[j];
        const cplx y = a[j + half];
        a[j] = x + y;
        a[j + half] = x - y;
      }
    }
  }
  return a;
}

// Subsets of {0..n-1} ordered by cardinality, then lexicographically by
// ascending index sequence. Calls fn(mask); stops when fn returns true.
template <typename Fn>
void for_each_subset_smallest_first(int n, Fn fn) {
  if (fn(0u)) return;
  std::vector<int> idx;
  for (int card = 1; card <= n; ++card) {
    idx.resize(card);
    for (int i = 0; i < card; ++i) idx[i] = i;
    while (true) {
      std::uint32_t mask = 0;
      for (const int i : idx) mask |= (1u << i);
      if (fn(mask)) return;
      int pos = card - 1;
      while (pos >= 0 && idx[pos] == n - card + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < card; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

// First (smallest) phase-flip subset achieving fidelity 1 within tolerance.
std::optional<std::uint32_t> find_phase_subset(const std::vector<PairedTerm>& paired,
                                               int n_bits) {
  const std::vector<cplx> overlaps = all_phase_overlaps(paired, n_bits);
  std::optional<std::uint32_t> hit;
  for_each_subset_smallest_first(n_bits, [&](std::uint32_t mask) {
    if (std::norm(overlaps[mask]) >= 1.0 - kFidelityTol) {
      hit = mask;
      return true;
    }
    return false;
  });
  return hit;
}

struct PatternTable {
  std::vector<std::string> measured;  // canonical measurement order
  std::unordered_map<std::string, std::vector<CircuitElement>> by_pattern;
};

PatternTable build_table(int m, int N) {
  const ModeLayout layout = ecp_mode_layout(m, N);
  const CghzParams ref = CghzParams::real_alpha(m, N, 1.0 / std::sqrt(2.0));

  // Reference conditional states for every pattern.
  const PhotonState joint = tensor(c_ghz_state(ref, layout.copy1), swapped_copy(ref, layout.copy2));
  const EcpCircuit ecp = build_ecp_circuit(ref);
  auto [kept, p_sel] = post_select(apply_circuit(joint, ecp.circuit), ecp.rule);
  if (kept.empty())
    throw std::logic_error("reference run kept nothing; cannot derive corrections");
  const std::vector<MeasurementResult> results = measure_pm(kept, ecp.measured);

  // The canonical concentrated form: the state whose image under the output
  // HWP layer is the maximally entangled target (HWPs are involutions, so it
  // equals the HWP layer applied to the target itself).
  const std::vector<std::string> flat = layout.copy1_flat();
  const PhotonState canonical = hwp_layer(target_state(ref, layout.copy1), flat);

  std::vector<std::size_t> v_modes(flat.size());
  for (std::size_t b = 0; b < flat.size(); ++b)
    v_modes[b] = canonical.registry().index_of(flat[b], Pol::V);
  const int n_bits = static_cast<int>(flat.size());

  std::vector<std::vector<CircuitElement>> found(results.size());
  // Failures are recorded, not thrown: solve() runs inside an OpenMP region,
  // which exceptions must not leave.
  std::vector<std::uint8_t> unsolved(results.size(), 0);
  auto solve = [&](std::size_t i) {
    const MeasurementResult& r = results[i];
    // Phase-flip compositions first (smallest subset wins) ...
    if (auto mask = find_phase_subset(pair_terms(r.conditional, canonical, v_modes), n_bits)) {
      std::vector<CircuitElement> corr;
      for (int b = 0; b < n_bits; ++b)
        if (*mask & (1u << b)) corr.push_back(phase_flip(flat[b]));
      found[i] = std::move(corr);
      return;
    }
    // ... then compositions that add bit flips (exhaustive fallback; not
    // reached for any instance under the implemented conventions).
    bool done = false;
    for_each_subset_smallest_first(n_bits, [&](std::uint32_t bmask) {
      if (bmask == 0) return false;
      PhotonState flipped = r.conditional;
      for (int b = 0; b < n_bits; ++b)
        if (bmask & (1u << b)) flipped = apply_bit_flip(flipped, flat[b]);
      if (auto mask = find_phase_subset(pair_terms(flipped, canonical, v_modes), n_bits)) {
        std::vector<CircuitElement> corr;
        for (int b = 0; b < n_bits; ++b)
          if (bmask & (1u << b)) corr.push_back(bit_flip(flat[b]));
        for (int b = 0; b < n_bits; ++b)
          if (*mask & (1u << b)) corr.push_back(phase_flip(flat[b]));
        found[i] = std::move(corr);
        done = true;
        return true;
      }
      return false;
    });
    if (!done) unsolved[i] = 1;
  };

#if defined(_OPENMP)
  if (execution() == Exec::Parallel && results.size() > 8) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(results.size()); ++i)
      solve(static_cast<std::size_t>(i));
  } else
#endif
  {
    for (std::size_t i = 0; i < results.size(); ++i) solve(i);
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (unsolved[i]) {
      throw std::logic_error("no flip composition corrects pattern " +
                             results[i].pattern.compact());
    }
  }

  PatternTable table;
  table.measured = ecp.measured;
  for (std::size_t i = 0; i < results.size(); ++i)
    table.by_pattern.emplace(results[i].pattern.compact(), std::move(found[i]));
  return table;
}

std::mutex g_table_mutex;
std::map<std::pair<int, int>, PatternTable> g_tables;

const PatternTable& table_for(int m, int N) {
  std::scoped_lock lock(g_table_mutex);
  const auto key = std::make_pair(m, N);
  auto it = g_tables.find(key);
  if (it == g_tables.end()) it = g_tables.emplace(key, build_table(m, N)).first;
  return it->second;
}

}  // namespace

std::vector<CircuitElement> correction_for(const DetectionPattern& pattern, int m, int N) {
  if (m < 2 || N < 2) throw std::invalid_argument("correction table requires m, N >= 2");
  const PatternTable& table = table_for(m, N);
  if (pattern.outcomes.size() != table.measured.size())
    throw PreconditionError("pattern arity does not match the m*N measured modes");
  for (std::size_t j = 0; j < table.measured.size(); ++j) {
    if (pattern.outcomes[j].first != table.measured[j])
      throw PreconditionError("pattern labels do not match the measured modes: expected " +
                              table.measured[j] + ", got " + pattern.outcomes[j].first);
  }
  const auto it = table.by_pattern.find(pattern.compact());
  if (it == table.by_pattern.end())
    throw PreconditionError("no correction recorded for pattern " + pattern.compact());
  return it->second;
}

}  // namespace cghz

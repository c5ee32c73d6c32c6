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

#include "cghz/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "cghz/execution.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cghz {

namespace {
constexpr double kNormTol = 1e-12;
constexpr double kAgreementTol = 1e-9;
}  // namespace

CghzParams CghzParams::make(int m, int N, cplx alpha, cplx beta) {
  if (m < 2 || N < 2) throw std::invalid_argument("protocol requires m >= 2 and N >= 2");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTol)
    throw std::invalid_argument("|alpha|^2 + |beta|^2 must equal 1");
  if (static_cast<long long>(m) * N > desk_cap())
    throw CapError("m*N = " + std::to_string(m * N) + " exceeds the configured cap of " +
                   std::to_string(desk_cap()));
  return CghzParams{m, N, alpha, beta};
}

CghzParams CghzParams::real_alpha(int m, int N, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("real alpha must lie in [0, 1]");
  return make(m, N, cplx{alpha, 0.0}, cplx{std::sqrt(1.0 - alpha * alpha), 0.0});
}

CghzParams CghzParams::complex_alpha(int m, int N, cplx alpha) {
  const double n = std::norm(alpha);
  if (n > 1.0 + kNormTol) throw std::invalid_argument("|alpha| must not exceed 1");
  return make(m, N, alpha, cplx{std::sqrt(std::max(0.0, 1.0 - n)), 0.0});
}

std::vector<std::string> ModeLayout::copy1_flat() const {
  std::vector<std::string> out;
  for (const auto& qubit : copy1) out.insert(out.end(), qubit.begin(), qubit.end());
  return out;
}

std::vector<std::string> ModeLayout::copy2_flat() const {
  std::vector<std::string> out;
  for (const auto& qubit : copy2) out.insert(out.end(), qubit.begin(), qubit.end());
  return out;
}

ModeLayout ecp_mode_layout(int m, int N) {
  ModeLayout layout;
  layout.copy1.resize(N);
  layout.copy2.resize(N);
  // Conventional letters for the two small instances; photon k of logic
  // qubit j draws from per-qubit letter lists.
  std::vector<std::vector<std::string>> letters;
  if (m == 2 && N == 2)
    letters = {{"a", "c"}, {"b", "d"}};
  else if (m == 3 && N == 2)
    letters = {{"a", "c", "t"}, {"b", "d", "h"}};
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < m; ++k) {
      std::string stem;
      if (!letters.empty())
        stem = letters[j][k];
      else
        stem = "q" + std::to_string(j + 1) + "p" + std::to_string(k + 1) + "c";
      layout.copy1[j].push_back(stem + "1");
      layout.copy2[j].push_back(stem + "2");
    }
  }
  return layout;
}

PhotonState ghz_state(int m, Sign sign, const std::vector<std::string>& labels) {
  if (m < 1) throw std::invalid_argument("GHZ block needs at least one photon");
  if (static_cast<int>(labels.size()) != m)
    throw std::invalid_argument("label count does not match photon count");
  ModeRegistry reg;
  for (const auto& label : labels) reg.register_spatial(label);
  const double a = 1.0 / std::sqrt(2.0);
  FockBasisState all_h, all_v;
  for (int k = 0; k < m; ++k) {
    all_h.add_photon(reg.index_of(labels[k], Pol::H));
    all_v.add_photon(reg.index_of(labels[k], Pol::V));
  }
  std::vector<Term> terms{Term{all_h, cplx{a, 0.0}},
                          Term{all_v, cplx{sign == Sign::Plus ? a : -a, 0.0}}};
  return PhotonState(std::move(reg), std::move(terms));
}

namespace {

// alpha (GHZ+)^N + beta (GHZ-)^N expanded directly: one ket per choice of
// all-H / all-V for each logic qubit, amplitude
// 2^(-N/2) (alpha + (-1)^(#all-V) beta).
PhotonState c_ghz_expand(int m, int N, cplx alpha, cplx beta,
                         const std::vector<std::vector<std::string>>& labels) {
  if (static_cast<int>(labels.size()) != N)
    throw std::invalid_argument("logic-qubit label count does not match N");
  ModeRegistry reg;
  for (const auto& qubit : labels) {
    if (static_cast<int>(qubit.size()) != m)
      throw std::invalid_argument("photon label count does not match m");
    for (const auto& label : qubit) reg.register_spatial(label);
  }
  const double scale = std::pow(0.5, 0.5 * N);
  std::vector<Term> terms;
  terms.reserve(std::size_t{1} << N);
  for (std::uint32_t bits = 0; bits < (1u << N); ++bits) {
    FockBasisState ket;
    for (int j = 0; j < N; ++j) {
      const Pol pol = (bits >> j) & 1 ? Pol::V : Pol::H;
      for (int k = 0; k < m; ++k) ket.add_photon(reg.index_of(labels[j][k], pol));
    }
    const double parity = std::popcount(bits) % 2 ? -1.0 : 1.0;
    terms.push_back(Term{ket, scale * (alpha + parity * beta)});
  }
  return PhotonState(std::move(reg), std::move(terms));
}

}  // namespace

PhotonState c_ghz_state(const CghzParams& p,
                        const std::vector<std::vector<std::string>>& labels) {
  return c_ghz_expand(p.m, p.N, p.alpha, p.beta, labels);
}

PhotonState swapped_copy(const CghzParams& p,
                         const std::vector<std::vector<std::string>>& labels) {
  PhotonState direct = c_ghz_expand(p.m, p.N, p.beta, p.alpha, labels);
  // Cross-check: a phase flip on the first photon of each logic qubit turns
  // GHZ+ into GHZ- and back, i.e. swaps the coefficients.
  PhotonState flipped = c_ghz_expand(p.m, p.N, p.alpha, p.beta, labels);
  for (const auto& qubit : labels) flipped = apply_phase_flip(flipped, qubit.front());
  const double overlap = std::abs(inner_product(direct, flipped));
  if (std::abs(overlap - 1.0) > 1e-9)
    throw std::logic_error("coefficient swap by phase flips disagrees with direct construction");
  return direct;
}

PhotonState target_state(const CghzParams& p,
                         const std::vector<std::vector<std::string>>& labels) {
  const double r = 1.0 / std::sqrt(2.0);
  return c_ghz_expand(p.m, p.N, cplx{r, 0.0}, cplx{r, 0.0}, labels);
}

double analytic_success(const CghzParams& p) {
  return std::norm(p.alpha) * std::norm(p.beta) *
         std::ldexp(1.0, -((p.m - 1) * p.N - 1));
}

EcpCircuit build_ecp_circuit(const CghzParams& p) {
  const ModeLayout layout = ecp_mode_layout(p.m, p.N);
  EcpCircuit ecp;
  for (const auto& label : layout.copy1_flat()) ecp.circuit.elements.push_back(hwp(label));
  for (const auto& label : layout.copy2_flat()) ecp.circuit.elements.push_back(hwp(label));
  for (int j = 0; j < p.N; ++j)
    for (int k = 0; k < p.m; ++k)
      ecp.circuit.elements.push_back(pbs(layout.copy1[j][k], layout.copy2[j][k]));
  for (const auto& label : layout.copy1_flat()) ecp.rule.required.emplace_back(label, 1);
  for (const auto& label : layout.copy2_flat()) ecp.rule.required.emplace_back(label, 1);
  ecp.measured = layout.copy2_flat();
  return ecp;
}

PhotonState hwp_layer(const PhotonState& s, const std::vector<std::string>& labels) {
  PhotonState cur = s;
  for (const auto& label : labels) cur = apply_hwp(cur, label);
  return cur;
}

double EcpReport::abs_error() const {
  return std::abs(success_probability - analytic_probability);
}

bool EcpReport::invariants_hold() const {
  if (abs_error() > kAgreementTol) return false;
  if (!outcomes.empty() && std::abs(min_fidelity - 1.0) > kAgreementTol) return false;
  for (const EcpOutcome& o : outcomes) {
    if (!(o.probability >= 0.0 && o.probability <= 1.0 + 1e-12)) return false;
  }
  return true;
}

EcpReport run_ecp(const CghzParams& p) {
  EcpReport report;
  report.params = p;
  report.analytic_probability = analytic_success(p);

  const ModeLayout layout = ecp_mode_layout(p.m, p.N);
  const PhotonState copy1 = c_ghz_state(p, layout.copy1);
  const PhotonState copy2 = swapped_copy(p, layout.copy2);
  const PhotonState joint = tensor(copy1, copy2);

  const EcpCircuit ecp = build_ecp_circuit(p);
  const PhotonState evolved = apply_circuit(joint, ecp.circuit);
  auto [kept, p_sel] = post_select(evolved, ecp.rule);

  if (kept.empty() || p_sel <= kPruneThreshold * kPruneThreshold) {
    report.success_probability = 0.0;
    report.min_fidelity = 1.0;
    return report;
  }

  // measure_pm on the unnormalized kept part: pattern probabilities come out
  // absolute (they sum to p_sel).
  std::vector<MeasurementResult> results = measure_pm(kept, ecp.measured);
  const PhotonState target = target_state(p, layout.copy1);
  const std::vector<std::string> copy1_labels = layout.copy1_flat();

  report.outcomes.resize(results.size());
  auto finish_outcome = [&](std::size_t i) {
    const MeasurementResult& r = results[i];
    EcpOutcome out;
    out.pattern = r.pattern;
    out.probability = r.probability;
    out.correction = correction_for(r.pattern, p.m, p.N);
    PhotonState corrected = r.conditional;
    for (const CircuitElement& e : out.correction) corrected = apply_element(corrected, e);
    out.corrected_state = hwp_layer(corrected, copy1_labels);
    out.fidelity = fidelity(out.corrected_state, target);
    report.outcomes[i] = std::move(out);
  };
  // The correction table is built lazily behind a cache; prime it serially
  // before fanning out.
  if (!results.empty()) correction_for(results.front().pattern, p.m, p.N);
#if defined(_OPENMP)
  if (execution() == Exec::Parallel && results.size() > 8) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(results.size()); ++i)
      finish_outcome(static_cast<std::size_t>(i));
  } else
#endif
  {
    for (std::size_t i = 0; i < results.size(); ++i) finish_outcome(i);
  }

  double success = 0.0;
  double min_fid = 1.0;
  for (const EcpOutcome& o : report.outcomes) {
    success += o.probability;
    min_fid = std::min(min_fid, o.fidelity);
  }
  report.success_probability = success;
  report.min_fidelity = report.outcomes.empty() ? 1.0 : min_fid;
  return report;
}

}  // namespace cghz

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

#include "cghz/analysis.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "cghz/execution.hpp"

namespace cghz {

namespace {

constexpr int kOracleMaxMN = 6;

// All m-bit qubit patterns (bit set = V photon) whose V count has the given
// parity. These are exactly the kets reached from an all-H / all-V qubit by
// the half-wave-plate layer, with uniform weight 2^-(m-1)/2 each.
std::vector<std::uint32_t> parity_patterns(int m, int parity) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < (1u << m); ++p) {
    if ((std::popcount(p) & 1) == parity) out.push_back(p);
  }
  return out;
}

// Concatenations of one parity-class pattern per logical qubit, packed with
// qubit j occupying bits [j*m, (j+1)*m).
std::vector<std::uint32_t> copy_patterns(int m, int N, int parity) {
  const std::vector<std::uint32_t> per_qubit = parity_patterns(m, parity);
  std::vector<std::uint32_t> out{0u};
  for (int j = 0; j < N; ++j) {
    std::vector<std::uint32_t> next;
    next.reserve(out.size() * per_qubit.size());
    for (std::uint32_t prefix : out) {
      for (std::uint32_t q : per_qubit) {
        next.push_back(prefix | (q << (j * m)));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string oracle_pattern_string(std::uint32_t sign_bits, int n_detectors) {
  std::string s(static_cast<std::size_t>(n_detectors), '+');
  for (int t = 0; t < n_detectors; ++t) {
    if ((sign_bits >> t) & 1u) s[static_cast<std::size_t>(t)] = '-';
  }
  return s;
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

OracleResult oracle_enumerate(const CghzParams& p) {
  const int mN = p.m * p.N;
  if (mN > kOracleMaxMN) {
    throw CapError("enumeration oracle supports m*N <= " +
                   std::to_string(kOracleMaxMN) + ", got m*N = " +
                   std::to_string(mN));
  }

  // Branch coefficients after the wave plates: copy 1 carries (alpha, beta)
  // on its (even, odd) parity classes, the swapped copy 2 carries
  // (beta, alpha).
  const cplx coef1[2] = {p.alpha, p.beta};
  const cplx coef2[2] = {p.beta, p.alpha};
  const double weight = std::ldexp(1.0, (1 - p.m) * p.N);

  struct KeptKet {
    std::uint32_t copy1_bits;  // bit t set = V photon in copy-1 slot t
    std::uint32_t copy2_bits;
    cplx amp;
  };
  std::vector<KeptKet> kept;
  double kept_norm_sq = 0.0;

  for (int b1 = 0; b1 < 2; ++b1) {
    const std::vector<std::uint32_t> pats1 = copy_patterns(p.m, p.N, b1);
    for (int b2 = 0; b2 < 2; ++b2) {
      const std::vector<std::uint32_t> pats2 = copy_patterns(p.m, p.N, b2);
      const cplx amp = coef1[b1] * coef2[b2] * weight;
      for (std::uint32_t c1 : pats1) {
        for (std::uint32_t c2 : pats2) {
          // Each beam splitter transmits H and exchanges V between the two
          // copies. Count the photons landing in each output slot and keep
          // the ket only if every slot holds exactly one.
          bool coincident = true;
          for (int t = 0; t < mN && coincident; ++t) {
            const int v1 = static_cast<int>((c1 >> t) & 1u);
            const int v2 = static_cast<int>((c2 >> t) & 1u);
            const int n_out1 = (1 - v1) + v2;  // kept H plus received V
            const int n_out2 = (1 - v2) + v1;
            coincident = (n_out1 == 1) && (n_out2 == 1);
          }
          if (!coincident) continue;
          kept.push_back({c1, c2, amp});
          kept_norm_sq += std::norm(amp);
        }
      }
    }
  }

  // Diagonal-basis detection of every copy-2 photon: detector t contributes
  // 2^-1/2 per photon and a sign flip when a V photon meets a minus
  // detector.
  OracleResult result;
  result.post_select_probability = kept_norm_sq;
  const double det_weight = std::ldexp(1.0, -mN) * weight * weight;
  const std::uint32_t n_sign_patterns = 1u << mN;
  for (std::uint32_t sign_bits = 0; sign_bits < n_sign_patterns;
       ++sign_bits) {
    // Group amplitudes by the residual copy-1 ket.
    std::map<std::uint32_t, cplx> residual;
    for (const KeptKet& k : kept) {
      const int flips = std::popcount(sign_bits & k.copy2_bits);
      const double sign = (flips & 1) ? -1.0 : 1.0;
      residual[k.copy1_bits] += (k.amp / weight) * sign;
    }
    double prob = 0.0;
    for (const auto& [bits, amp] : residual) prob += std::norm(amp);
    prob *= det_weight;
    result.pattern_probabilities[oracle_pattern_string(sign_bits, mN)] = prob;
    result.success_probability += prob;
  }
  return result;
}

namespace {

using BlockPattern = std::pair<Pol, Pol>;

const std::vector<BlockPattern>& even_blocks() {
  static const std::vector<BlockPattern> v{{Pol::H, Pol::H},
                                           {Pol::V, Pol::V}};
  return v;
}

const std::vector<BlockPattern>& odd_blocks() {
  static const std::vector<BlockPattern> v{{Pol::H, Pol::V},
                                           {Pol::V, Pol::H}};
  return v;
}

ModeRegistry joint_registry_22(const ModeLayout& layout) {
  ModeRegistry reg;
  for (const std::string& s : layout.copy1_flat()) reg.register_spatial(s);
  for (const std::string& s : layout.copy2_flat()) reg.register_spatial(s);
  return reg;
}

void place_block(const ModeRegistry& reg, FockBasisState& ket,
                 const std::string& first, const std::string& second,
                 const BlockPattern& pattern) {
  ket.add_photon(reg.index_of(first, pattern.first));
  ket.add_photon(reg.index_of(second, pattern.second));
}

}  // namespace

PhotonState reference_posthwp_22(const CghzParams& p) {
  if (p.m != 2 || p.N != 2) {
    throw PreconditionError("reference expansion is specific to m = N = 2");
  }
  const ModeLayout layout = ecp_mode_layout(2, 2);
  const ModeRegistry reg = joint_registry_22(layout);
  // Parity class -> branch coefficient, per copy: copy 1 keeps (alpha,
  // beta), the swapped copy 2 carries (beta, alpha). Each copy spreads
  // uniformly over its class with weight 1/2, giving 64 four-photon terms
  // of amplitude c1*c2/4.
  const cplx coef1[2] = {p.alpha, p.beta};
  const cplx coef2[2] = {p.beta, p.alpha};
  std::vector<Term> terms;
  terms.reserve(64);
  for (int class1 = 0; class1 < 2; ++class1) {
    const auto& blocks1 = (class1 == 0) ? even_blocks() : odd_blocks();
    for (int class2 = 0; class2 < 2; ++class2) {
      const auto& blocks2 = (class2 == 0) ? even_blocks() : odd_blocks();
      const cplx amp = coef1[class1] * coef2[class2] * 0.25;
      for (const BlockPattern& u1 : blocks1) {
        for (const BlockPattern& u2 : blocks1) {
          for (const BlockPattern& v1 : blocks2) {
            for (const BlockPattern& v2 : blocks2) {
              FockBasisState ket;
              place_block(reg, ket, layout.copy1[0][0], layout.copy1[0][1],
                          u1);
              place_block(reg, ket, layout.copy1[1][0], layout.copy1[1][1],
                          u2);
              place_block(reg, ket, layout.copy2[0][0], layout.copy2[0][1],
                          v1);
              place_block(reg, ket, layout.copy2[1][0], layout.copy2[1][1],
                          v2);
              terms.push_back({ket, amp});
            }
          }
        }
      }
    }
  }
  return PhotonState(reg, std::move(terms));
}

PhotonState reference_postselected_22(const CghzParams& p) {
  if (p.m != 2 || p.N != 2) {
    throw PreconditionError("reference expansion is specific to m = N = 2");
  }
  const ModeLayout layout = ecp_mode_layout(2, 2);
  const ModeRegistry reg = joint_registry_22(layout);
  // Coincidences survive only when copy 2 mirrors copy 1 pattern-for-
  // pattern, which selects the cross terms: eight kets of amplitude
  // alpha*beta/4, normalized here to unit length.
  const cplx amp = p.alpha * p.beta * 0.25;
  std::vector<Term> terms;
  terms.reserve(8);
  for (int cls = 0; cls < 2; ++cls) {
    const auto& blocks = (cls == 0) ? even_blocks() : odd_blocks();
    for (const BlockPattern& u1 : blocks) {
      for (const BlockPattern& u2 : blocks) {
        FockBasisState ket;
        place_block(reg, ket, layout.copy1[0][0], layout.copy1[0][1], u1);
        place_block(reg, ket, layout.copy1[1][0], layout.copy1[1][1], u2);
        place_block(reg, ket, layout.copy2[0][0], layout.copy2[0][1], u1);
        place_block(reg, ket, layout.copy2[1][0], layout.copy2[1][1], u2);
        terms.push_back({ket, amp});
      }
    }
  }
  return normalize(PhotonState(reg, std::move(terms))).first;
}

// ---------------------------------------------------------------------------
// Parameter sweeps

std::vector<double> SweepSpec::alpha_grid(int count) {
  if (count < 1) throw std::invalid_argument("alpha grid needs count >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    out.push_back(static_cast<double>(i) / static_cast<double>(count + 1));
  }
  return out;
}

SweepSpec SweepSpec::default_spec() {
  SweepSpec spec;
  spec.alphas = alpha_grid(25);
  return spec;
}

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

SweepRow compute_row(int m, int N, double alpha) {
  SweepRow row;
  row.m = m;
  row.N = N;
  row.alpha = alpha;
  try {
    const CghzParams params = CghzParams::real_alpha(m, N, alpha);
    const auto start = std::chrono::steady_clock::now();
    const EcpReport report = run_ecp(params);
    const auto stop = std::chrono::steady_clock::now();
    row.p_analytic = report.analytic_probability;
    row.p_simulated = report.success_probability;
    row.abs_error = report.abs_error();
    row.min_fidelity = report.min_fidelity;
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  } catch (const CapError& e) {
    row.skipped = true;
    row.skip_reason = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const std::vector<int> ms = sorted_unique(spec.m_values);
  const std::vector<int> ns = sorted_unique(spec.n_values);
  const std::vector<double> alphas = sorted_unique(spec.alphas);
  if (ms.empty() || ns.empty() || alphas.empty()) {
    throw std::invalid_argument("sweep grid must be non-empty");
  }
  for (int m : ms) {
    if (m < 2) throw std::invalid_argument("sweep requires m >= 2");
  }
  for (int N : ns) {
    if (N < 2) throw std::invalid_argument("sweep requires N >= 2");
  }
  for (double a : alphas) {
    if (!(a > 0.0) || !(a < 1.0)) {
      throw std::invalid_argument(
          "sweep alphas must lie strictly inside (0, 1)");
    }
  }

  struct Cell {
    int m;
    int N;
    double alpha;
  };
  std::vector<Cell> cells;
  cells.reserve(ms.size() * ns.size() * alphas.size());
  for (int m : ms) {
    for (int N : ns) {
      for (double a : alphas) cells.push_back({m, N, a});
    }
  }

  std::vector<SweepRow> rows(cells.size());
  const bool parallel = execution() == Exec::Parallel && cells.size() > 1;
  const std::int64_t n_cells = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n_cells; ++i) {
    const Cell& c = cells[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = compute_row(c.m, c.N, c.alpha);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "m,N,alpha,p_analytic,p_simulated,abs_error,min_fidelity,"
        "runtime_ms\n";
  for (const SweepRow& r : rows) {
    if (r.skipped) {
      os << "# skipped m=" << r.m << " N=" << r.N
         << " alpha=" << format_g17(r.alpha) << ": " << r.skip_reason
         << "\n";
      continue;
    }
    os << r.m << ',' << r.N << ',' << format_g17(r.alpha) << ','
       << format_g17(r.p_analytic) << ',' << format_g17(r.p_simulated)
       << ',' << format_g17(r.abs_error) << ','
       << format_g17(r.min_fidelity) << ',' << format_g17(r.runtime_ms)
       << '\n';
  }
}

void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) {
    nlohmann::ordered_json obj;
    obj["m"] = r.m;
    obj["N"] = r.N;
    obj["alpha"] = r.alpha;
    if (r.skipped) {
      obj["skipped"] = r.skip_reason;
    } else {
      obj["p_analytic"] = r.p_analytic;
      obj["p_simulated"] = r.p_simulated;
      obj["abs_error"] = r.abs_error;
      obj["min_fidelity"] = r.min_fidelity;
      obj["runtime_ms"] = r.runtime_ms;
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << "\n";
}

std::vector<SweepRow> parse_sweep_json(std::istream& is) {
  const nlohmann::json arr = nlohmann::json::parse(is);
  if (!arr.is_array()) {
    throw std::invalid_argument("sweep JSON must be an array of rows");
  }
  std::vector<SweepRow> rows;
  rows.reserve(arr.size());
  for (const auto& obj : arr) {
    SweepRow r;
    r.m = obj.at("m").get<int>();
    r.N = obj.at("N").get<int>();
    r.alpha = obj.at("alpha").get<double>();
    if (obj.contains("skipped")) {
      r.skipped = true;
      r.skip_reason = obj.at("skipped").get<std::string>();
    } else {
      r.p_analytic = obj.at("p_analytic").get<double>();
      r.p_simulated = obj.at("p_simulated").get<double>();
      r.abs_error = obj.at("abs_error").get<double>();
      r.min_fidelity = obj.at("min_fidelity").get<double>();
      r.runtime_ms = obj.at("runtime_ms").get<double>();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace cghz

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

#include <functional>
#include <string>
#include <vector>

#include "doctest.h"

#include "cghz/analysis.hpp"
#include "cghz/execution.hpp"
#include "cghz/fock.hpp"
#include "cghz/measurement.hpp"
#include "cghz/optics.hpp"
#include "cghz/protocol.hpp"

namespace {

using cghz::CghzParams;
using cghz::Exec;
using cghz::PhotonState;
using cghz::ScopedExecution;

// Runs `make_state` under both execution policies and requires bit-identical
// term lists (same kets, same amplitude bit patterns, same order).
void check_identical(const std::function<PhotonState()>& make_state) {
  PhotonState serial, parallel;
  {
    ScopedExecution mode(Exec::Serial);
    serial = make_state();
  }
  {
    ScopedExecution mode(Exec::Parallel);
    parallel = make_state();
  }
  REQUIRE(serial.registry() == parallel.registry());
  REQUIRE(serial.terms().size() == parallel.terms().size());
  for (std::size_t i = 0; i < serial.terms().size(); ++i) {
    CHECK(serial.terms()[i].ket == parallel.terms()[i].ket);
    CHECK(serial.terms()[i].amp.real() == parallel.terms()[i].amp.real());
    CHECK(serial.terms()[i].amp.imag() == parallel.terms()[i].amp.imag());
  }
}

PhotonState joint_input(const CghzParams& p) {
  const auto layout = cghz::ecp_mode_layout(p.m, p.N);
  return tensor(cghz::c_ghz_state(p, layout.copy1),
                cghz::swapped_copy(p, layout.copy2));
}

}  // namespace

TEST_CASE("execution policy switches and restores") {
  const Exec before = cghz::execution();
  {
    ScopedExecution mode(Exec::Serial);
    CHECK(cghz::execution() == Exec::Serial);
    {
      ScopedExecution inner(Exec::Parallel);
      CHECK(cghz::execution() == Exec::Parallel);
    }
    CHECK(cghz::execution() == Exec::Serial);
  }
  CHECK(cghz::execution() == before);
}

TEST_CASE("wave-plate layer is policy independent bit for bit") {
  const CghzParams p = CghzParams::real_alpha(3, 2, 0.6);
  const auto layout = cghz::ecp_mode_layout(3, 2);
  const PhotonState joint = joint_input(p);
  std::vector<std::string> all = layout.copy1_flat();
  for (const auto& l : layout.copy2_flat()) all.push_back(l);
  check_identical([&] { return cghz::hwp_layer(joint, all); });
}

TEST_CASE("beam-splitter cascade is policy independent bit for bit") {
  const CghzParams p = CghzParams::real_alpha(3, 2, 0.6);
  const auto ecp = cghz::build_ecp_circuit(p);
  const PhotonState joint = joint_input(p);
  check_identical([&] { return apply_circuit(joint, ecp.circuit); });
}

TEST_CASE("coincidence filtering is policy independent bit for bit") {
  const CghzParams p = CghzParams::real_alpha(3, 2, 0.6);
  const auto ecp = cghz::build_ecp_circuit(p);
  const PhotonState routed = apply_circuit(joint_input(p), ecp.circuit);
  check_identical([&] { return cghz::post_select(routed, ecp.rule).first; });

  double serial_prob, parallel_prob;
  {
    ScopedExecution mode(Exec::Serial);
    serial_prob = cghz::post_select(routed, ecp.rule).second;
  }
  {
    ScopedExecution mode(Exec::Parallel);
    parallel_prob = cghz::post_select(routed, ecp.rule).second;
  }
  CHECK(serial_prob == parallel_prob);
}

TEST_CASE("sign measurement is policy independent bit for bit") {
  const CghzParams p = CghzParams::real_alpha(3, 2, 0.6);
  const auto ecp = cghz::build_ecp_circuit(p);
  const auto kept = cghz::post_select(apply_circuit(joint_input(p), ecp.circuit),
                                      ecp.rule).first;

  std::vector<cghz::MeasurementResult> serial, parallel;
  {
    ScopedExecution mode(Exec::Serial);
    serial = cghz::measure_pm(kept, ecp.measured);
  }
  {
    ScopedExecution mode(Exec::Parallel);
    parallel = cghz::measure_pm(kept, ecp.measured);
  }
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].pattern == parallel[i].pattern);
    CHECK(serial[i].probability == parallel[i].probability);
    REQUIRE(serial[i].conditional.terms().size() ==
            parallel[i].conditional.terms().size());
    for (std::size_t t = 0; t < serial[i].conditional.terms().size(); ++t) {
      CHECK(serial[i].conditional.terms()[t].ket ==
            parallel[i].conditional.terms()[t].ket);
      CHECK(serial[i].conditional.terms()[t].amp ==
            parallel[i].conditional.terms()[t].amp);
    }
  }
}

TEST_CASE("whole concentration runs agree across policies") {
  for (auto [m, N] : {std::pair{2, 2}, std::pair{3, 2}}) {
    CAPTURE(m);
    CAPTURE(N);
    const CghzParams p = CghzParams::real_alpha(m, N, 0.6);
    cghz::EcpReport serial, parallel;
    {
      ScopedExecution mode(Exec::Serial);
      serial = cghz::run_ecp(p);
    }
    {
      ScopedExecution mode(Exec::Parallel);
      parallel = cghz::run_ecp(p);
    }
    CHECK(serial.success_probability == parallel.success_probability);
    CHECK(serial.min_fidelity == parallel.min_fidelity);
    REQUIRE(serial.outcomes.size() == parallel.outcomes.size());
    for (std::size_t i = 0; i < serial.outcomes.size(); ++i) {
      CHECK(serial.outcomes[i].pattern == parallel.outcomes[i].pattern);
      CHECK(serial.outcomes[i].probability == parallel.outcomes[i].probability);
      CHECK(serial.outcomes[i].fidelity == parallel.outcomes[i].fidelity);
    }
  }
}

TEST_CASE("sweep rows agree across policies") {
  cghz::SweepSpec spec;
  spec.m_values = {2};
  spec.n_values = {2, 3};
  spec.alphas = {0.3, 0.7};
  std::vector<cghz::SweepRow> serial, parallel;
  {
    ScopedExecution mode(Exec::Serial);
    serial = cghz::run_sweep(spec);
  }
  {
    ScopedExecution mode(Exec::Parallel);
    parallel = cghz::run_sweep(spec);
  }
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].p_analytic == parallel[i].p_analytic);
    CHECK(serial[i].p_simulated == parallel[i].p_simulated);
    CHECK(serial[i].abs_error == parallel[i].abs_error);
    CHECK(serial[i].min_fidelity == parallel[i].min_fidelity);
  }
}

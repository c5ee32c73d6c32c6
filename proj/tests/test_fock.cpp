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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "cghz/fock.hpp"
#include "reference_kernels.hpp"

using namespace cghz;

namespace {

ModeRegistry two_spatials() {
  ModeRegistry reg;
  reg.register_spatial("a1");
  reg.register_spatial("c1");
  return reg;
}

}  // namespace

TEST_CASE("registry stores (H, V) pairs in registration order") {
  ModeRegistry reg;
  CHECK(reg.register_spatial("a1") == 0);
  CHECK(reg.register_spatial("c1") == 2);
  CHECK(reg.size() == 4);
  CHECK(reg.index_of("a1", Pol::H) == 0);
  CHECK(reg.index_of("a1", Pol::V) == 1);
  CHECK(reg.index_of("c1", Pol::V) == 3);
  CHECK(reg.mode(2).spatial == "c1");
  CHECK(reg.mode(2).pol == Pol::H);
  CHECK(reg.has_spatial("c1"));
  CHECK_FALSE(reg.has_spatial("b1"));
  CHECK(reg.spatial_labels() == std::vector<std::string>{"a1", "c1"});

  CHECK_THROWS_AS(reg.register_spatial("a1"), RegistryError);
  CHECK_THROWS_AS(reg.register_spatial(""), RegistryError);
  CHECK_THROWS_AS(reg.index_of("zz", Pol::H), RegistryError);
}

TEST_CASE("registry rejects growth past the packed-key capacity") {
  ModeRegistry reg;
  for (int i = 0; i < 32; ++i) reg.register_spatial("s" + std::to_string(i));
  CHECK(reg.size() == kMaxModes);
  CHECK_THROWS_AS(reg.register_spatial("one_too_many"), RegistryError);
}

TEST_CASE("basis kets pack occupations across both words") {
  FockBasisState ket;
  CHECK(ket.total_photons() == 0);
  ket.set_occupation(0, 2);
  ket.set_occupation(31, 1);  // last slot of the first word
  ket.set_occupation(32, 3);  // first slot of the second word
  ket.set_occupation(63, 1);
  CHECK(ket.occupation(0) == 2);
  CHECK(ket.occupation(31) == 1);
  CHECK(ket.occupation(32) == 3);
  CHECK(ket.occupation(63) == 1);
  CHECK(ket.occupation(5) == 0);
  CHECK(ket.total_photons() == 7);

  const std::vector<int> occ = ket.occupations(64);
  CHECK(occ[32] == 3);
  CHECK(occ[33] == 0);

  SUBCASE("occupancy is capped") {
    CHECK_THROWS_AS(ket.set_occupation(4, kMaxOccupancy + 1), OccupancyError);
    ket.set_occupation(4, kMaxOccupancy);
    CHECK_THROWS_AS(ket.add_photon(4), OccupancyError);
  }
  SUBCASE("kets order by packed key") {
    FockBasisState other;
    other.set_occupation(0, 1);
    CHECK(other < ket);
    CHECK(ket == ket);
  }
}

TEST_CASE("states canonicalize: sorted kets, merged duplicates, pruned dust") {
  const ModeRegistry reg = two_spatials();
  FockBasisState hh, vv;
  hh.add_photon(reg.index_of("a1", Pol::H));
  hh.add_photon(reg.index_of("c1", Pol::H));
  vv.add_photon(reg.index_of("a1", Pol::V));
  vv.add_photon(reg.index_of("c1", Pol::V));

  // Deliberately unsorted, duplicated, and carrying a negligible term.
  FockBasisState hv;
  hv.add_photon(reg.index_of("a1", Pol::H));
  hv.add_photon(reg.index_of("c1", Pol::V));
  const PhotonState s(reg, {{vv, cplx(0.25, 0.0)},
                            {hh, cplx(0.5, 0.0)},
                            {vv, cplx(0.25, 0.0)},
                            {hv, cplx(1e-13, 0.0)}});
  REQUIRE(s.terms().size() == 2);
  CHECK(s.terms()[0].ket == hh);  // lower packed key first
  CHECK(s.amplitude(hh) == cplx(0.5, 0.0));
  CHECK(s.amplitude(vv) == cplx(0.5, 0.0));
  CHECK(s.amplitude(hv) == cplx(0.0, 0.0));
  CHECK(s.photon_count() == 2);
  CHECK(s.norm_sq() == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("mixed photon numbers are rejected") {
    FockBasisState single;
    single.add_photon(0);
    CHECK_THROWS_AS(PhotonState(reg, {{hh, 1.0}, {single, 1.0}}),
                    PreconditionError);
  }
  SUBCASE("kets outside the registry are rejected") {
    FockBasisState outside;
    outside.add_photon(reg.size());  // first mode past the registry
    outside.add_photon(0);
    CHECK_THROWS_AS(PhotonState(reg, {{outside, 1.0}}), RegistryError);
  }
  SUBCASE("cancelling duplicates leave no residue") {
    const PhotonState zero(reg, {{hh, cplx(0.7, 0.2)}, {hh, cplx(-0.7, -0.2)}});
    CHECK(zero.empty());
    CHECK(zero.photon_count() == 0);
  }
}

TEST_CASE("ket and vacuum constructors") {
  const ModeRegistry reg = two_spatials();
  const PhotonState s =
      PhotonState::ket(reg, {{"a1", Pol::V}, {"c1", Pol::H}});
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms()[0].amp == cplx(1.0, 0.0));
  CHECK(s.terms()[0].ket.occupation(reg.index_of("a1", Pol::V)) == 1);
  CHECK(s.terms()[0].ket.occupation(reg.index_of("c1", Pol::H)) == 1);
  CHECK(s.photon_count() == 2);

  const PhotonState vac = PhotonState::vacuum(reg);
  REQUIRE(vac.terms().size() == 1);
  CHECK(vac.photon_count() == 0);
  CHECK(vac.norm_sq() == 1.0);
}

TEST_CASE("tensor concatenates registries and multiplies amplitudes") {
  ModeRegistry ra, rb;
  ra.register_spatial("a1");
  rb.register_spatial("a2");
  const auto bell = [](const ModeRegistry& reg, const std::string& label,
                       cplx ch, cplx cv) {
    FockBasisState h, v;
    h.add_photon(reg.index_of(label, Pol::H));
    v.add_photon(reg.index_of(label, Pol::V));
    return PhotonState(reg, {{h, ch}, {v, cv}});
  };
  const PhotonState left = bell(ra, "a1", cplx(0.6, 0.0), cplx(0.0, 0.8));
  const PhotonState right = bell(rb, "a2", cplx(0.8, 0.0), cplx(-0.6, 0.0));

  const PhotonState joint = tensor(left, right);
  CHECK(joint.registry().size() == 4);
  CHECK(joint.registry().mode(0).spatial == "a1");  // left modes first
  CHECK(joint.registry().mode(2).spatial == "a2");
  REQUIRE(joint.terms().size() == 4);
  CHECK(joint.photon_count() == 2);
  FockBasisState hv;
  hv.add_photon(joint.registry().index_of("a1", Pol::H));
  hv.add_photon(joint.registry().index_of("a2", Pol::V));
  CHECK(joint.amplitude(hv) == cplx(0.6, 0.0) * cplx(-0.6, 0.0));
  CHECK(joint.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("shared labels are rejected") {
    ModeRegistry rc;
    rc.register_spatial("a1");
    FockBasisState h;
    h.add_photon(0);
    const PhotonState clash(rc, {{h, 1.0}});
    CHECK_THROWS_AS(tensor(left, clash), RegistryError);
  }
  SUBCASE("tensor is associative") {
    testref::TestRng rng(99);
    ModeRegistry rc;
    rc.register_spatial("x9");
    const PhotonState third = testref::random_state(rc, 2, 3, rng);
    const PhotonState lr = tensor(tensor(left, right), third);
    const PhotonState rl = tensor(left, tensor(right, third));
    REQUIRE(lr.terms().size() == rl.terms().size());
    CHECK(lr.registry() == rl.registry());
    // Amplitudes agree up to the non-associativity of float products.
    CHECK(testref::max_term_diff(lr, rl) < 1e-15);
  }
}

TEST_CASE("inner products and fidelity") {
  const ModeRegistry reg = two_spatials();
  testref::TestRng rng(7);
  const PhotonState a = testref::random_state(reg, 2, 4, rng);
  const PhotonState b = testref::random_state(reg, 2, 4, rng);

  CHECK(inner_product(a, a).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner_product(a, a).imag()) < 1e-14);
  // Conjugate symmetry.
  const cplx ab = inner_product(a, b);
  const cplx ba = inner_product(b, a);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-14);
  CHECK(fidelity(a, b) == doctest::Approx(std::norm(ab)).epsilon(1e-12));

  // Orthogonal basis kets.
  const PhotonState k1 = PhotonState::ket(reg, {{"a1", Pol::H}, {"c1", Pol::H}});
  const PhotonState k2 = PhotonState::ket(reg, {{"a1", Pol::V}, {"c1", Pol::V}});
  CHECK(inner_product(k1, k2) == cplx(0.0, 0.0));
  CHECK(fidelity(k1, k1) == 1.0);

  SUBCASE("different registries are rejected") {
    ModeRegistry other;
    other.register_spatial("zz");
    other.register_spatial("yy");
    FockBasisState h;
    h.add_photon(0);
    h.add_photon(2);
    CHECK_THROWS_AS(inner_product(a, PhotonState(other, {{h, 1.0}})),
                    RegistryError);
  }
}

TEST_CASE("normalize rescales and rejects the zero state") {
  const ModeRegistry reg = two_spatials();
  const PhotonState k =
      scaled(PhotonState::ket(reg, {{"a1", Pol::H}, {"c1", Pol::V}}), cplx(0.0, 3.0));
  const auto [unit, n2] = normalize(k);
  CHECK(n2 == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(unit.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.terms()[0].amp == cplx(0.0, 1.0));

  const PhotonState zero(reg, {});
  CHECK_THROWS_AS(normalize(zero), NormalizationError);
}

TEST_CASE("add and scaled follow the linear structure") {
  const ModeRegistry reg = two_spatials();
  const PhotonState k1 = PhotonState::ket(reg, {{"a1", Pol::H}, {"c1", Pol::H}});
  const PhotonState k2 = PhotonState::ket(reg, {{"a1", Pol::V}, {"c1", Pol::V}});
  const PhotonState sum = add(scaled(k1, cplx(0.5, 0.0)), scaled(k2, cplx(0.0, 0.5)));
  REQUIRE(sum.terms().size() == 2);
  CHECK(sum.amplitude(k1.terms()[0].ket) == cplx(0.5, 0.0));
  CHECK(sum.amplitude(k2.terms()[0].ket) == cplx(0.0, 0.5));
  // Adding the negation cancels exactly.
  CHECK(add(sum, scaled(sum, -1.0)).empty());

  SUBCASE("photon-number mixing is rejected") {
    const PhotonState single = PhotonState::ket(reg, {{"a1", Pol::H}});
    CHECK_THROWS_AS(add(k1, single), PreconditionError);
  }
}

TEST_CASE("state listing is deterministic and readable") {
  const ModeRegistry reg = two_spatials();
  const PhotonState s = add(
      scaled(PhotonState::ket(reg, {{"a1", Pol::H}, {"c1", Pol::H}}), 0.5),
      scaled(PhotonState::ket(reg, {{"a1", Pol::V}, {"c1", Pol::V}}),
             cplx(0.0, -0.5)));
  CHECK(to_string(s) ==
        "(+0.5, +0) |H>_a1 |H>_c1\n"
        "(+0, -0.5) |V>_a1 |V>_c1\n");
  CHECK(to_string(PhotonState::vacuum(reg)) == "(+1, +0) |vac>\n");
}

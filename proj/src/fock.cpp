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

#include "cghz/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cghz/execution.hpp"

#if defined(_OPENMP)
#include <omp.h>
#include <parallel/algorithm>
#endif

namespace cghz {

// ---------------------------------------------------------------------------
// ModeRegistry

std::size_t ModeRegistry::register_spatial(const std::string& label) {
  if (label.empty()) throw RegistryError("empty spatial label");
  if (spatial_index_.count(label))
    throw RegistryError("spatial label already registered: " + label);
  if (modes_.size() + 2 > kMaxModes)
    throw RegistryError("mode registry full (max " + std::to_string(kMaxModes) + " modes)");
  const std::size_t idx = modes_.size();
  modes_.push_back(ModeId{label, Pol::H});
  modes_.push_back(ModeId{label, Pol::V});
  spatial_index_.emplace(label, idx);
  return idx;
}

bool ModeRegistry::has_spatial(const std::string& label) const noexcept {
  return spatial_index_.count(label) != 0;
}

std::size_t ModeRegistry::index_of(const std::string& label, Pol pol) const {
  const auto it = spatial_index_.find(label);
  if (it == spatial_index_.end()) throw RegistryError("unknown spatial label: " + label);
  return it->second + (pol == Pol::V ? 1 : 0);
}

std::vector<std::string> ModeRegistry::spatial_labels() const {
  std::vector<std::string> out;
  out.reserve(modes_.size() / 2);
  for (std::size_t i = 0; i < modes_.size(); i += 2) out.push_back(modes_[i].spatial);
  return out;
}

// ---------------------------------------------------------------------------
// FockBasisState

void FockBasisState::set_occupation(std::size_t mode, int count) {
  if (mode >= kMaxModes) throw RegistryError("mode index out of range");
  if (count < 0 || count > kMaxOccupancy)
    throw OccupancyError("occupation " + std::to_string(count) + " outside [0, " +
                         std::to_string(kMaxOccupancy) + "]");
  const std::size_t w = mode >> 5;
  const unsigned shift = (mode & 31u) * 2;
  words_[w] = (words_[w] & ~(std::uint64_t{3} << shift)) |
              (static_cast<std::uint64_t>(count) << shift);
}

int FockBasisState::total_photons() const {
  // Each 2-bit field holds lo + 2*hi; sum fields via two popcounts per word.
  constexpr std::uint64_t lo_mask = 0x5555555555555555ull;
  int total = 0;
  for (const std::uint64_t w : words_) {
    total += std::popcount(w & lo_mask);
    total += 2 * std::popcount(w & ~lo_mask);
  }
  return total;
}

std::vector<int> FockBasisState::occupations(std::size_t n_modes) const {
  std::vector<int> out(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) out[i] = occupation(i);
  return out;
}

// ---------------------------------------------------------------------------
// canonical form

namespace detail {

void canonicalize(std::vector<Term>& terms) {
  // stable_sort keeps emission order within equal kets, so the accumulation
  // order below is independent of the execution policy.
#if defined(_OPENMP)
  if (execution() == Exec::Parallel && terms.size() > (1u << 15)) {
    __gnu_parallel::stable_sort(terms.begin(), terms.end(),
                                [](const Term& a, const Term& b) { return a.ket < b.ket; });
  } else
#endif
  {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.ket < b.ket; });
  }
  std::size_t out = 0;
  std::size_t i = 0;
  while (i < terms.size()) {
    FockBasisState ket = terms[i].ket;
    cplx amp = terms[i].amp;
    for (++i; i < terms.size() && terms[i].ket == ket; ++i) amp += terms[i].amp;
    if (std::abs(amp) >= kPruneThreshold) terms[out++] = Term{ket, amp};
  }
  terms.resize(out);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PhotonState

namespace {

// True when no 2-bit occupation field past `n_modes` is set.
bool within_registry(const FockBasisState& k, std::size_t n_modes) {
  const std::uint64_t w0 = FockKeyOps::word(k, 0);
  const std::uint64_t w1 = FockKeyOps::word(k, 1);
  if (n_modes >= kMaxModes) return true;
  if (n_modes >= 32) return (w1 >> ((n_modes - 32) * 2)) == 0;
  return (w0 >> (n_modes * 2)) == 0 && w1 == 0;
}

}  // namespace

PhotonState::PhotonState(ModeRegistry registry, std::vector<Term> terms)
    : registry_(std::move(registry)), terms_(std::move(terms)) {
  detail::canonicalize(terms_);
  if (!terms_.empty()) {
    const int n = terms_.front().ket.total_photons();
    for (const Term& t : terms_) {
      if (t.ket.total_photons() != n)
        throw PreconditionError("kets with differing photon numbers in one state");
      if (!within_registry(t.ket, registry_.size()))
        throw RegistryError("ket occupies a mode outside the registry");
    }
  }
}

PhotonState PhotonState::ket(const ModeRegistry& registry,
                             const std::vector<std::pair<std::string, Pol>>& photons) {
  FockBasisState k;
  for (const auto& [label, pol] : photons) k.add_photon(registry.index_of(label, pol));
  return PhotonState(registry, {Term{k, cplx{1.0, 0.0}}});
}

PhotonState PhotonState::vacuum(const ModeRegistry& registry) {
  return PhotonState(registry, {Term{FockBasisState{}, cplx{1.0, 0.0}}});
}

cplx PhotonState::amplitude(const FockBasisState& ket) const {
  const auto it = std::lower_bound(
      terms_.begin(), terms_.end(), ket,
      [](const Term& t, const FockBasisState& k) { return t.ket < k; });
  if (it != terms_.end() && it->ket == ket) return it->amp;
  return cplx{0.0, 0.0};
}

double PhotonState::norm_sq() const {
  double n = 0.0;
  for (const Term& t : terms_) n += std::norm(t.amp);
  return n;
}

int PhotonState::photon_count() const {
  return terms_.empty() ? 0 : terms_.front().ket.total_photons();
}

// ---------------------------------------------------------------------------
// free operations

PhotonState tensor(const PhotonState& a, const PhotonState& b) {
  ModeRegistry combined;
  for (const auto& label : a.registry().spatial_labels()) combined.register_spatial(label);
  for (const auto& label : b.registry().spatial_labels()) {
    if (combined.has_spatial(label))
      throw RegistryError("tensor operands share spatial label: " + label);
    combined.register_spatial(label);
  }
  const std::size_t na = a.terms().size();
  const std::size_t nb = b.terms().size();
  const std::size_t shift = a.registry().size();
  std::vector<Term> out(na * nb);

  auto emit = [&](std::size_t i) {
    const Term& ta = a.terms()[i];
    for (std::size_t j = 0; j < nb; ++j) {
      const Term& tb = b.terms()[j];
      FockBasisState k = ta.ket;
      for (std::size_t m = 0; m < b.registry().size(); ++m) {
        const int occ = tb.ket.occupation(m);
        if (occ != 0) k.set_occupation(shift + m, occ);
      }
      out[i * nb + j] = Term{k, ta.amp * tb.amp};
    }
  };
#if defined(_OPENMP)
  if (execution() == Exec::Parallel && na * nb > (1u << 12)) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(na); ++i) emit(static_cast<std::size_t>(i));
  } else
#endif
  {
    for (std::size_t i = 0; i < na; ++i) emit(i);
  }
  return PhotonState(std::move(combined), std::move(out));
}

cplx inner_product(const PhotonState& a, const PhotonState& b) {
  if (!(a.registry() == b.registry()))
    throw RegistryError("inner product between states over different registries");
  cplx acc{0.0, 0.0};
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->ket < ib->ket) {
      ++ia;
    } else if (ib->ket < ia->ket) {
      ++ib;
    } else {
      acc += std::conj(ia->amp) * ib->amp;
      ++ia;
      ++ib;
    }
  }
  return acc;
}

double fidelity(const PhotonState& a, const PhotonState& b) {
  return std::norm(inner_product(a, b));
}

std::pair<PhotonState, double> normalize(const PhotonState& s) {
  const double n2 = s.norm_sq();
  if (n2 <= kPruneThreshold * kPruneThreshold)
    throw NormalizationError("cannot normalize a zero state");
  const double inv = 1.0 / std::sqrt(n2);
  std::vector<Term> terms = s.terms();
  for (Term& t : terms) t.amp *= inv;
  return {PhotonState(s.registry(), std::move(terms)), n2};
}

PhotonState add(const PhotonState& a, const PhotonState& b) {
  if (!(a.registry() == b.registry()))
    throw RegistryError("adding states over different registries");
  std::vector<Term> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return PhotonState(a.registry(), std::move(terms));
}

PhotonState scaled(const PhotonState& s, cplx factor) {
  std::vector<Term> terms = s.terms();
  for (Term& t : terms) t.amp *= factor;
  return PhotonState(s.registry(), std::move(terms));
}

std::string to_string(const PhotonState& s) {
  std::ostringstream os;
  char buf[64];
  for (const Term& t : s.terms()) {
    std::snprintf(buf, sizeof buf, "(%+.17g, %+.17g)", t.amp.real(), t.amp.imag());
    os << buf;
    for (std::size_t m = 0; m < s.registry().size(); ++m) {
      const int occ = t.ket.occupation(m);
      for (int c = 0; c < occ; ++c)
        os << " |" << pol_char(s.registry().mode(m).pol) << ">_" << s.registry().mode(m).spatial;
    }
    if (t.ket.total_photons() == 0) os << " |vac>";
    os << '\n';
  }
  return os.str();
}

}  // namespace cghz

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

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cghz {

using cplx = std::complex<double>;

// Amplitudes below this magnitude are dropped when a state is canonicalized.
inline constexpr double kPruneThreshold = 1e-12;
// Occupation numbers are stored in 2-bit fields; the simulated protocol never
// exceeds 2 photons per mode, the extra headroom catches bugs.
inline constexpr int kMaxOccupancy = 3;
inline constexpr std::size_t kMaxModes = 64;

struct RegistryError : std::runtime_error {
  explicit RegistryError(const std::string& what) : std::runtime_error(what) {}
};
struct OccupancyError : std::runtime_error {
  explicit OccupancyError(const std::string& what) : std::runtime_error(what) {}
};
struct NormalizationError : std::runtime_error {
  explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

enum class Pol : unsigned char { H = 0, V = 1 };

inline char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

// One optical mode: a spatial label plus a polarization.
struct ModeId {
  std::string spatial;
  Pol pol;
  bool operator==(const ModeId&) const = default;
};

// Ordered collection of modes. Spatial labels are registered as (H, V) pairs
// and keep their registration order; that order defines the index layout of
// every basis ket built on the registry.
class ModeRegistry {
 public:
  // Registers (label, H) and (label, V); returns the index of the H mode.
  std::size_t register_spatial(const std::string& label);

  bool has_spatial(const std::string& label) const noexcept;
  std::size_t index_of(const std::string& label, Pol pol) const;
  std::size_t size() const noexcept { return modes_.size(); }
  const ModeId& mode(std::size_t i) const { return modes_.at(i); }
  const std::vector<ModeId>& modes() const noexcept { return modes_; }
  // Spatial labels in registration order.
  std::vector<std::string> spatial_labels() const;

  bool operator==(const ModeRegistry& other) const { return modes_ == other.modes_; }

 private:
  std::vector<ModeId> modes_;
  std::map<std::string, std::size_t> spatial_index_;  // label -> index of H mode
};

// Basis ket in occupation-number representation, packed 2 bits per mode.
class FockBasisState {
 public:
  int occupation(std::size_t mode) const {
    return static_cast<int>((words_[mode >> 5] >> ((mode & 31u) * 2)) & 3u);
  }
  void set_occupation(std::size_t mode, int count);
  // Adds one photon to `mode`; throws OccupancyError past kMaxOccupancy.
  void add_photon(std::size_t mode) { set_occupation(mode, occupation(mode) + 1); }

  int total_photons() const;
  std::vector<int> occupations(std::size_t n_modes) const;

  auto operator<=>(const FockBasisState&) const = default;

 private:
  std::array<std::uint64_t, 2> words_{0, 0};
  friend struct FockKeyOps;
};

// Internal helpers that need raw word access (mode permutations, masks).
struct FockKeyOps {
  static std::uint64_t word(const FockBasisState& k, int i) { return k.words_[i]; }
  static void set_word(FockBasisState& k, int i, std::uint64_t w) { k.words_[i] = w; }
};

struct Term {
  FockBasisState ket;
  cplx amp;
};

// Sparse pure state: canonical (key-sorted, merged, pruned) list of terms over
// a mode registry. Value semantics; all operations return new states.
class PhotonState {
 public:
  PhotonState() = default;
  // Canonicalizes `terms` and validates photon-number uniformity across kets.
  PhotonState(ModeRegistry registry, std::vector<Term> terms);

  // Amplitude-1 basis ket holding one photon per listed (spatial, pol) entry.
  static PhotonState ket(const ModeRegistry& registry,
                         const std::vector<std::pair<std::string, Pol>>& photons);
  // The vacuum ket (single term, no photons).
  static PhotonState vacuum(const ModeRegistry& registry);

  const ModeRegistry& registry() const noexcept { return registry_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  cplx amplitude(const FockBasisState& ket) const;  // 0 when absent
  double norm_sq() const;
  // Photon number shared by all kets (0 for the empty state).
  int photon_count() const;

 private:
  ModeRegistry registry_;
  std::vector<Term> terms_;
};

// Tensor product; spatial label sets must be disjoint (RegistryError
// otherwise). The combined registry lists all left modes, then all right.
PhotonState tensor(const PhotonState& a, const PhotonState& b);

// <a|b>; registries must be identical (RegistryError otherwise).
cplx inner_product(const PhotonState& a, const PhotonState& b);

// |<a|b>|^2.
double fidelity(const PhotonState& a, const PhotonState& b);

// Returns (s / ||s||, ||s||^2). NormalizationError on a (numerically) zero state.
std::pair<PhotonState, double> normalize(const PhotonState& s);

// Linear combination helpers; registries must match and photon numbers agree.
PhotonState add(const PhotonState& a, const PhotonState& b);
PhotonState scaled(const PhotonState& s, cplx factor);

// Deterministic listing, one `(re, im) |P>_label ...` line per ket.
std::string to_string(const PhotonState& s);

namespace detail {
// Sort by ket (stable), merge equal kets, prune below kPruneThreshold.
// Deterministic for either execution policy.
void canonicalize(std::vector<Term>& terms);
}  // namespace detail

}  // namespace cghz

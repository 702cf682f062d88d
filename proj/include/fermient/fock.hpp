// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Occupation-number representation of antisymmetric N-fermion states.
 *
 * Orbitals are numbered mode-major: orbital = mode * internal_dim + level, so
 * every orbital of mode 0 precedes every orbital of mode 1, and so on.
 *
 * Sign convention: the canonical ket |S⟩ of an occupied set S = {s1 < ... < sN}
 * is f†_{s1} f†_{s2} ... f†_{sN} |0⟩. Creating or destroying orbital i on |S⟩
 * therefore picks up (-1)^{#{s ∈ S : s < i}}.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fermient {

using Complex = std::complex<double>;

/// Amplitudes below this modulus are dropped after arithmetic.
inline constexpr double kPruneTolerance = 1e-14;
/// Absolute tolerance for equality checks on complex amplitudes.
inline constexpr double kEqualityTolerance = 1e-10;

/// Raised on precondition violations (bad orbital index, mismatched bases, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ============================================================================
// OrbitalBasis
// ============================================================================

/**
 * Single-particle basis: (spatial mode) x (internal level), mode-major.
 *
 * Immutable after construction. At most 64 orbitals so that occupations fit a
 * machine word.
 */
class OrbitalBasis {
 public:
  static constexpr int kMaxOrbitals = 64;

  OrbitalBasis(std::vector<std::string> modes, int internal_dim)
      : modes_(std::move(modes)), internal_dim_(internal_dim) {
    if (modes_.empty()) throw DomainError("OrbitalBasis: at least one spatial mode required");
    if (internal_dim_ < 1) throw DomainError("OrbitalBasis: internal_dim must be positive");
    for (std::size_t i = 0; i < modes_.size(); ++i)
      for (std::size_t j = i + 1; j < modes_.size(); ++j)
        if (modes_[i] == modes_[j]) throw DomainError("OrbitalBasis: duplicate mode label " + modes_[i]);
    if (size() > kMaxOrbitals) throw DomainError("OrbitalBasis: more than 64 orbitals");
  }

  /// The double-well basis {A, B} x {0..n-1}.
  static OrbitalBasis two_mode(int internal_dim) { return OrbitalBasis({"A", "B"}, internal_dim); }

  [[nodiscard]] int num_modes() const noexcept { return static_cast<int>(modes_.size()); }
  [[nodiscard]] int internal_dim() const noexcept { return internal_dim_; }
  [[nodiscard]] int size() const noexcept { return num_modes() * internal_dim_; }
  [[nodiscard]] const std::vector<std::string>& modes() const noexcept { return modes_; }
  [[nodiscard]] const std::string& mode_label(int mode) const { return modes_.at(static_cast<std::size_t>(mode)); }

  [[nodiscard]] int mode_index(std::string_view label) const {
    auto it = std::find(modes_.begin(), modes_.end(), label);
    if (it == modes_.end()) throw DomainError("OrbitalBasis: unknown mode label " + std::string(label));
    return static_cast<int>(it - modes_.begin());
  }

  [[nodiscard]] int orbital(int mode, int level) const {
    if (mode < 0 || mode >= num_modes() || level < 0 || level >= internal_dim_)
      throw DomainError("OrbitalBasis: (mode, level) out of range");
    return mode * internal_dim_ + level;
  }
  [[nodiscard]] int mode_of(int orbital) const { return check(orbital) / internal_dim_; }
  [[nodiscard]] int level_of(int orbital) const { return check(orbital) % internal_dim_; }

  /// Bit mask selecting every orbital of one spatial mode (contiguous by construction).
  [[nodiscard]] std::uint64_t mode_mask(int mode) const {
    if (mode < 0 || mode >= num_modes()) throw DomainError("OrbitalBasis: mode out of range");
    const std::uint64_t block = internal_dim_ == 64 ? ~0ULL : ((1ULL << internal_dim_) - 1);
    return block << (mode * internal_dim_);
  }

  int check(int orbital) const {
    if (orbital < 0 || orbital >= size()) throw DomainError("orbital index " + std::to_string(orbital) + " out of range");
    return orbital;
  }

  bool operator==(const OrbitalBasis&) const = default;

 private:
  std::vector<std::string> modes_;
  int internal_dim_;
};

// ============================================================================
// Occupation
// ============================================================================

/**
 * Set of occupied orbitals, bit i <-> orbital i.
 *
 * Ordering is lexicographic on the ascending orbital lists, which is the order
 * used for serialization and for enumerating sector bases.
 */
class Occupation {
 public:
  constexpr Occupation() = default;
  constexpr explicit Occupation(std::uint64_t bits) : bits_(bits) {}

  /// Throws on duplicates; order of the input is irrelevant.
  static Occupation from_orbitals(std::span<const int> orbitals) {
    std::uint64_t bits = 0;
    for (int o : orbitals) {
      if (o < 0 || o >= 64) throw DomainError("Occupation: orbital index out of range");
      const std::uint64_t bit = 1ULL << o;
      if (bits & bit) throw DomainError("Occupation: duplicate orbital " + std::to_string(o));
      bits |= bit;
    }
    return Occupation(bits);
  }
  static Occupation from_orbitals(std::initializer_list<int> orbitals) {
    return from_orbitals(std::span<const int>(orbitals.begin(), orbitals.size()));
  }

  [[nodiscard]] constexpr std::uint64_t bits() const noexcept { return bits_; }
  [[nodiscard]] constexpr int count() const noexcept { return std::popcount(bits_); }
  [[nodiscard]] constexpr bool contains(int orbital) const noexcept { return (bits_ >> orbital) & 1ULL; }
  [[nodiscard]] constexpr int count_below(int orbital) const noexcept {
    return std::popcount(bits_ & ((1ULL << orbital) - 1));
  }
  [[nodiscard]] constexpr int count_in(std::uint64_t mask) const noexcept { return std::popcount(bits_ & mask); }
  [[nodiscard]] constexpr Occupation with(int orbital) const noexcept { return Occupation(bits_ | (1ULL << orbital)); }
  [[nodiscard]] constexpr Occupation without(int orbital) const noexcept { return Occupation(bits_ & ~(1ULL << orbital)); }

  [[nodiscard]] std::vector<int> orbitals() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  constexpr bool operator==(const Occupation&) const = default;

  /// Lexicographic order of ascending orbital lists. For equal-size sets the
  /// set holding the lowest differing orbital is smaller; a proper prefix is
  /// smaller than its extensions.
  friend constexpr bool operator<(const Occupation& a, const Occupation& b) noexcept {
    const std::uint64_t diff = a.bits_ ^ b.bits_;
    if (!diff) return false;
    const std::uint64_t low = diff & (~diff + 1);
    const std::uint64_t below = low - 1;
    // Elements below the first difference agree; if one side has no element at
    // or above `low`, it is a prefix of the other.
    const bool a_has = a.bits_ & low;
    if (a_has) return (b.bits_ & ~below) != 0;
    return (a.bits_ & ~below) == 0;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Parity sign of placing the ordered list `left` before `right`, relative to the
/// ascending order of their union: (-1)^{#pairs l in left, r in right, l > r}.
inline int concatenation_sign(Occupation left, Occupation right) noexcept {
  int inversions = 0;
  for (std::uint64_t b = left.bits(); b; b &= b - 1) inversions += right.count_below(std::countr_zero(b));
  return (inversions & 1) ? -1 : 1;
}

/// All k-subsets of {0..d-1} in lexicographic order.
inline std::vector<Occupation> sector_basis(int d, int k) {
  if (d < 0 || d > 64 || k < 0) throw DomainError("sector_basis: bad dimensions");
  std::vector<Occupation> out;
  if (k > d) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(Occupation::from_orbitals(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// Position of each occupation in `kets`.
inline std::map<Occupation, Eigen::Index> index_of(const std::vector<Occupation>& kets) {
  std::map<Occupation, Eigen::Index> out;
  for (std::size_t i = 0; i < kets.size(); ++i) out.emplace(kets[i], static_cast<Eigen::Index>(i));
  return out;
}

// ============================================================================
// FockVector
// ============================================================================

/**
 * Sparse complex amplitudes over occupations with a fixed particle number.
 *
 * Operations below are pure and return new vectors; `add` exists for building
 * a vector and is the only mutating entry point.
 */
class FockVector {
 public:
  using Map = std::map<Occupation, Complex>;

  FockVector(OrbitalBasis basis, int n_particles) : basis_(std::move(basis)), n_(n_particles) {
    if (n_ < 0 || n_ > basis_.size()) throw DomainError("FockVector: particle number out of range");
  }

  static FockVector vacuum(OrbitalBasis basis) {
    FockVector v(std::move(basis), 0);
    v.add(Occupation{}, 1.0);
    return v;
  }

  [[nodiscard]] const OrbitalBasis& basis() const noexcept { return basis_; }
  [[nodiscard]] int n_particles() const noexcept { return n_; }
  [[nodiscard]] const Map& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] auto begin() const noexcept { return amps_.begin(); }
  [[nodiscard]] auto end() const noexcept { return amps_.end(); }
  [[nodiscard]] std::size_t nonzero_count() const noexcept { return amps_.size(); }
  [[nodiscard]] bool is_zero() const noexcept { return amps_.empty(); }

  [[nodiscard]] Complex amplitude(Occupation occ) const {
    auto it = amps_.find(occ);
    return it == amps_.end() ? Complex{} : it->second;
  }

  /// Accumulates `value` onto `occ`; entries that cancel below the prune threshold vanish.
  FockVector& add(Occupation occ, Complex value) {
    if (occ.count() != n_) throw DomainError("FockVector: occupation has wrong particle number");
    if ((occ.bits() >> basis_.size()) != 0) throw DomainError("FockVector: occupation outside basis");
    auto [it, inserted] = amps_.try_emplace(occ, value);
    if (!inserted) it->second += value;
    if (std::abs(it->second) < kPruneTolerance) amps_.erase(it);
    return *this;
  }

  [[nodiscard]] double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& [occ, a] : amps_) s += std::norm(a);
    return s;
  }
  [[nodiscard]] double norm() const noexcept { return std::sqrt(norm_squared()); }

  /// Unit-norm copy; the zero vector stays zero.
  [[nodiscard]] FockVector normalized() const {
    const double nrm = norm();
    if (nrm == 0.0) return *this;
    return scaled(1.0 / nrm);
  }

  [[nodiscard]] FockVector scaled(Complex factor) const {
    FockVector out(basis_, n_);
    for (const auto& [occ, a] : amps_) out.add(occ, factor * a);
    return out;
  }

  friend FockVector operator+(const FockVector& u, const FockVector& v) {
    u.require_compatible(v);
    FockVector out = u;
    for (const auto& [occ, a] : v.amps_) out.add(occ, a);
    return out;
  }
  friend FockVector operator-(const FockVector& u, const FockVector& v) { return u + v.scaled(-1.0); }
  friend FockVector operator*(Complex factor, const FockVector& v) { return v.scaled(factor); }

  void require_compatible(const FockVector& other) const {
    if (!(basis_ == other.basis_)) throw DomainError("FockVector: basis mismatch");
    if (n_ != other.n_) throw DomainError("FockVector: particle number mismatch");
  }

 private:
  OrbitalBasis basis_;
  int n_;
  Map amps_;
};

// ============================================================================
// Operators
// ============================================================================

/// f†_orbital v. Kets already holding the orbital are annihilated.
inline FockVector apply_creation(int orbital, const FockVector& v) {
  v.basis().check(orbital);
  // Every orbital is filled: the result is zero, reported in the full sector.
  if (v.n_particles() == v.basis().size()) return FockVector(v.basis(), v.n_particles());
  FockVector out(v.basis(), v.n_particles() + 1);
  for (const auto& [occ, a] : v) {
    if (occ.contains(orbital)) continue;
    const double sign = (occ.count_below(orbital) & 1) ? -1.0 : 1.0;
    out.add(occ.with(orbital), sign * a);
  }
  return out;
}

/// f_orbital v, the adjoint of apply_creation.
inline FockVector apply_annihilation(int orbital, const FockVector& v) {
  v.basis().check(orbital);
  if (v.n_particles() == 0) throw DomainError("apply_annihilation: vector has no particles");
  FockVector out(v.basis(), v.n_particles() - 1);
  for (const auto& [occ, a] : v) {
    if (!occ.contains(orbital)) continue;
    const double sign = (occ.count_below(orbital) & 1) ? -1.0 : 1.0;
    out.add(occ.without(orbital), sign * a);
  }
  return out;
}

/// f†_{i1} ... f†_{iN} |0⟩ for distinct orbitals, in the given creation order.
inline FockVector slater_state(const OrbitalBasis& basis, std::span<const int> orbitals) {
  for (int o : orbitals) basis.check(o);
  (void)Occupation::from_orbitals(orbitals);  // rejects duplicates
  FockVector v = FockVector::vacuum(basis);
  for (auto it = orbitals.rbegin(); it != orbitals.rend(); ++it) v = apply_creation(*it, v);
  return v;
}
inline FockVector slater_state(const OrbitalBasis& basis, std::initializer_list<int> orbitals) {
  return slater_state(basis, std::span<const int>(orbitals.begin(), orbitals.size()));
}

/// ⟨u|v⟩.
inline Complex inner_product(const FockVector& u, const FockVector& v) {
  u.require_compatible(v);
  Complex s{};
  const auto& small = u.nonzero_count() <= v.nonzero_count() ? u : v;
  const auto& large = &small == &u ? v : u;
  for (const auto& [occ, a] : small) {
    const Complex b = large.amplitude(occ);
    s += &small == &u ? std::conj(a) * b : std::conj(b) * a;
  }
  return s;
}

/// |⟨u|v⟩|² / (‖u‖²‖v‖²); phase-insensitive overlap of two nonzero vectors.
inline double fidelity(const FockVector& u, const FockVector& v) {
  const double nu = u.norm_squared(), nv = v.norm_squared();
  if (nu == 0.0 || nv == 0.0) throw DomainError("fidelity: zero vector");
  return std::norm(inner_product(u, v)) / (nu * nv);
}

/// Largest amplitude difference; used for equality up to tolerance.
inline double max_abs_difference(const FockVector& u, const FockVector& v) {
  u.require_compatible(v);
  double worst = 0.0;
  for (const auto& [occ, a] : u) worst = std::max(worst, std::abs(a - v.amplitude(occ)));
  for (const auto& [occ, b] : v) worst = std::max(worst, std::abs(b - u.amplitude(occ)));
  return worst;
}

/// Dense amplitude column over sector_basis(d, N).
inline Eigen::VectorXcd to_dense(const FockVector& v) {
  const auto kets = sector_basis(v.basis().size(), v.n_particles());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kets.size()));
  for (std::size_t i = 0; i < kets.size(); ++i) out(static_cast<Eigen::Index>(i)) = v.amplitude(kets[i]);
  return out;
}

inline FockVector from_dense(const OrbitalBasis& basis, int n_particles, const Eigen::VectorXcd& column) {
  const auto kets = sector_basis(basis.size(), n_particles);
  if (static_cast<Eigen::Index>(kets.size()) != column.size()) throw DomainError("from_dense: size mismatch");
  FockVector out(basis, n_particles);
  for (std::size_t i = 0; i < kets.size(); ++i) out.add(kets[i], column(static_cast<Eigen::Index>(i)));
  return out;
}

// ============================================================================
// SectorDensityMatrix
// ============================================================================

/// Density operator on the antisymmetric N-particle sector, indexed by
/// sector_basis(d, N).
struct SectorDensityMatrix {
  OrbitalBasis basis;
  int n_particles;
  Eigen::MatrixXcd rho;

  [[nodiscard]] std::vector<Occupation> kets() const { return sector_basis(basis.size(), n_particles); }
};

inline SectorDensityMatrix pure_density(const FockVector& v) {
  const Eigen::VectorXcd col = to_dense(v);
  return {v.basis(), v.n_particles(), col * col.adjoint()};
}

}  // namespace fermient

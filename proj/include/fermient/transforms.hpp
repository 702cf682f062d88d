// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file transforms.hpp
 * @brief Splitting unitaries, their lift to Fock space, and particle-number detection.
 */

#pragma once

#include "fermient/firstq.hpp"
#include "fermient/fock.hpp"

#include <cmath>
#include <map>
#include <string_view>
#include <utility>

namespace fermient {

/// A d x d unitary on the single-particle space of a basis.
class SingleParticleUnitary {
 public:
  SingleParticleUnitary(OrbitalBasis basis, Eigen::MatrixXcd matrix) : basis_(std::move(basis)), m_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(basis_.size());
    if (m_.rows() != d || m_.cols() != d) throw DomainError("SingleParticleUnitary: dimension mismatch");
    const double defect = (m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > kEqualityTolerance) throw DomainError("SingleParticleUnitary: matrix is not unitary");
  }

  static SingleParticleUnitary identity(const OrbitalBasis& basis) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    return {basis, Eigen::MatrixXcd::Identity(d, d)};
  }

  [[nodiscard]] const OrbitalBasis& basis() const noexcept { return basis_; }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  [[nodiscard]] SingleParticleUnitary adjoint() const { return {basis_, m_.adjoint()}; }

  /// (a * b)|φ⟩ = a(b|φ⟩).
  friend SingleParticleUnitary operator*(const SingleParticleUnitary& a, const SingleParticleUnitary& b) {
    if (!(a.basis_ == b.basis_)) throw DomainError("SingleParticleUnitary: basis mismatch");
    return {a.basis_, a.m_ * b.m_};
  }

 private:
  OrbitalBasis basis_;
  Eigen::MatrixXcd m_;
};

/// Probability table over (n_A, n_B).
struct CountingDistribution {
  std::map<std::pair<int, int>, double> probabilities;

  [[nodiscard]] double at(int n_a, int n_b) const {
    auto it = probabilities.find({n_a, n_b});
    return it == probabilities.end() ? 0.0 : it->second;
  }
  [[nodiscard]] double total() const {
    double s = 0.0;
    for (const auto& [key, pr] : probabilities) s += pr;
    return s;
  }
};

/**
 * Tunneling splitter between the two wells, acting identically on every internal level:
 *
 *   U|A,σ⟩ = √(1-p)|A,σ⟩ + √p|B,σ⟩
 *   U|B,σ⟩ = √(1-p)|B,σ⟩ - √p|A,σ⟩
 *
 * `forward = false` gives the inverse map.
 */
inline SingleParticleUnitary make_split(const OrbitalBasis& basis, double p, bool forward = true) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("make_split: p must lie in [0, 1]");
  if (basis.num_modes() != 2) throw DomainError("make_split: basis must have exactly two spatial modes");
  const double stay = std::sqrt(1.0 - p);
  const double hop = std::sqrt(p);
  Eigen::Matrix2d mode_rotation;
  mode_rotation << stay, -hop,
                   hop,  stay;
  if (!forward) mode_rotation.transposeInPlace();
  const int n = basis.internal_dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  for (int to = 0; to < 2; ++to)
    for (int from = 0; from < 2; ++from)
      for (int level = 0; level < n; ++level)
        m(basis.orbital(to, level), basis.orbital(from, level)) = mode_rotation(to, from);
  return {basis, m};
}

namespace detail {

/// Σ_k u(k, column) f†_k v.
inline FockVector apply_rotated_creation(const Eigen::MatrixXcd& u, int column, const FockVector& v) {
  FockVector out(v.basis(), v.n_particles() + 1);
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const Complex coeff = u(k, column);
    if (std::abs(coeff) < kPruneTolerance) continue;
    const FockVector term = apply_creation(static_cast<int>(k), v);
    for (const auto& [occ, a] : term) out.add(occ, coeff * a);
  }
  return out;
}

}  // namespace detail

/// Replaces every f†_s by Σ_k U_{ks} f†_k in each canonical ket and re-expands.
inline FockVector lift_unitary(const SingleParticleUnitary& u, const FockVector& v) {
  if (!(u.basis() == v.basis())) throw DomainError("lift_unitary: basis mismatch");
  FockVector out(v.basis(), v.n_particles());
  for (const auto& [occ, a] : v) {
    const std::vector<int> orbs = occ.orbitals();
    FockVector ket = FockVector::vacuum(v.basis());
    for (auto it = orbs.rbegin(); it != orbs.rend(); ++it) ket = detail::apply_rotated_creation(u.matrix(), *it, ket);
    for (const auto& [target, b] : ket) out.add(target, a * b);
  }
  return out;
}

struct Projection {
  FockVector state;    ///< normalized, or zero when probability == 0
  double probability;  ///< squared norm of the kept component
};

/// Keeps the kets with exactly `count` particles in `mode`.
inline Projection project_mode_count(const FockVector& v, int mode, int count) {
  if (count < 0 || count > v.n_particles()) throw DomainError("project_mode_count: count out of range");
  const std::uint64_t mask = v.basis().mode_mask(mode);
  FockVector kept(v.basis(), v.n_particles());
  for (const auto& [occ, a] : v)
    if (occ.count_in(mask) == count) kept.add(occ, a);
  const double prob = kept.norm_squared();
  if (prob == 0.0) return {kept, 0.0};
  return {kept.normalized(), prob};
}

inline Projection project_mode_count(const FockVector& v, std::string_view mode, int count) {
  return project_mode_count(v, v.basis().mode_index(mode), count);
}

/// Squared norm of every (n_A, n_B) sector of a two-mode state.
inline CountingDistribution counting_statistics(const FockVector& v) {
  if (v.basis().num_modes() != 2) throw DomainError("counting_statistics: basis must have two spatial modes");
  const std::uint64_t mask_a = v.basis().mode_mask(0);
  CountingDistribution out;
  for (const auto& [occ, a] : v) {
    const int n_a = occ.count_in(mask_a);
    out.probabilities[{n_a, v.n_particles() - n_a}] += std::norm(a);
  }
  return out;
}

/**
 * Counting statistics of the distinguishable-particle reference: the two-qubit
 * singlet with one particle held in each well, written as a plain tensor product
 * (no antisymmetrization), after the splitter acts on each particle.
 */
inline CountingDistribution distinguishable_reference_counts(double p) {
  const OrbitalBasis basis = OrbitalBasis::two_mode(2);
  FirstQuantizedTensor ref(2, basis.size());
  const double r = 1.0 / std::sqrt(2.0);
  ref.at({basis.orbital(0, 0), basis.orbital(1, 1)}) = r;   // |A↓⟩ ⊗ |B↑⟩
  ref.at({basis.orbital(0, 1), basis.orbital(1, 0)}) = -r;  // |A↑⟩ ⊗ |B↓⟩
  const FirstQuantizedTensor out = apply_each_slot(make_split(basis, p).matrix(), ref);
  return {mode_count_probabilities(out, basis.internal_dim())};
}

}  // namespace fermient

// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file detector.hpp
 * @brief Toy particle counter coupled to the fermions in well A.
 *
 * The counter has D levels and advances cyclically by one level per fermion
 * found in mode A. The single-particle coupling h is the principal-branch
 * generator of the cyclic shift, exp(-i h τ) = S; the joint evolution is
 * exp(-i n̂_A ⊗ h t), the second-quantized form of Σ_particles |A⟩⟨A| ⊗ h.
 */

#pragma once

#include "fermient/fock.hpp"
#include "fermient/transforms.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace fermient {

struct DetectorCoupling {
  int levels;           ///< D
  double tau;           ///< interaction duration (ħ = 1)
  Eigen::MatrixXcd h;   ///< Hermitian single-particle coupling on the counter

  /// exp(-i h t), from the eigendecomposition of h.
  [[nodiscard]] Eigen::MatrixXcd propagator(double t) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXd w = eig.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(Complex(0.0, -w(k) * t));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
};

/// The cyclic shift |n⟩ -> |n+1 mod D⟩.
inline Eigen::MatrixXcd cyclic_shift(int levels) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(levels, levels);
  for (int n = 0; n < levels; ++n) s((n + 1) % levels, n) = 1.0;
  return s;
}

/// h with exp(-i h τ) equal to the cyclic shift on D levels.
inline DetectorCoupling build_coupling(int levels, double tau) {
  if (levels < 2) throw DomainError("build_coupling: need at least two detector levels");
  if (!(tau > 0.0)) throw DomainError("build_coupling: tau must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  // Columns f_k = D^{-1/2} Σ_n e^{-2πi kn/D} |n⟩ satisfy S f_k = e^{2πi k/D} f_k.
  Eigen::MatrixXcd fourier(levels, levels);
  for (int n = 0; n < levels; ++n)
    for (int k = 0; k < levels; ++k)
      fourier(n, k) = std::polar(1.0 / std::sqrt(static_cast<double>(levels)), -two_pi * k * n / levels);
  Eigen::VectorXcd energies(levels);
  for (int k = 0; k < levels; ++k) {
    double phase = two_pi * k / levels;
    if (phase > std::numbers::pi) phase -= two_pi;  // principal branch (-π, π]
    energies(k) = -phase / tau;
  }
  Eigen::MatrixXcd h = fourier * energies.asDiagonal() * fourier.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  return {levels, tau, std::move(h)};
}

/// Amplitudes over (occupation, detector level).
class JointState {
 public:
  using Key = std::pair<Occupation, int>;
  using Map = std::map<Key, Complex>;

  JointState(OrbitalBasis basis, int n_particles, int levels)
      : basis_(std::move(basis)), n_(n_particles), levels_(levels) {}

  /// v ⊗ |level⟩.
  static JointState product(const FockVector& v, int levels, int level) {
    if (level < 0 || level >= levels) throw DomainError("JointState: detector level out of range");
    JointState j(v.basis(), v.n_particles(), levels);
    for (const auto& [occ, a] : v) j.add(occ, level, a);
    return j;
  }

  [[nodiscard]] const OrbitalBasis& basis() const noexcept { return basis_; }
  [[nodiscard]] int n_particles() const noexcept { return n_; }
  [[nodiscard]] int levels() const noexcept { return levels_; }
  [[nodiscard]] const Map& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] auto begin() const noexcept { return amps_.begin(); }
  [[nodiscard]] auto end() const noexcept { return amps_.end(); }

  [[nodiscard]] Complex amplitude(Occupation occ, int level) const {
    auto it = amps_.find({occ, level});
    return it == amps_.end() ? Complex{} : it->second;
  }

  JointState& add(Occupation occ, int level, Complex value) {
    if (occ.count() != n_) throw DomainError("JointState: occupation has wrong particle number");
    if (level < 0 || level >= levels_) throw DomainError("JointState: detector level out of range");
    auto [it, inserted] = amps_.try_emplace(Key{occ, level}, value);
    if (!inserted) it->second += value;
    if (std::abs(it->second) < kPruneTolerance) amps_.erase(it);
    return *this;
  }

  [[nodiscard]] double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& [key, a] : amps_) s += std::norm(a);
    return s;
  }

 private:
  OrbitalBasis basis_;
  int n_;
  int levels_;
  Map amps_;
};

/// exp(-i n̂_A ⊗ h t) applied to a joint state.
inline JointState evolve(const JointState& j, const DetectorCoupling& coupling, double t) {
  if (j.levels() != coupling.levels) throw DomainError("evolve: detector dimension mismatch");
  const std::uint64_t mask_a = j.basis().mode_mask(0);
  std::map<int, Eigen::MatrixXcd> propagators;
  JointState out(j.basis(), j.n_particles(), j.levels());
  for (const auto& [key, a] : j) {
    const auto& [occ, level] = key;
    const int in_a = occ.count_in(mask_a);
    auto it = propagators.find(in_a);
    if (it == propagators.end()) it = propagators.emplace(in_a, coupling.propagator(t * in_a)).first;
    for (int k = 0; k < j.levels(); ++k) out.add(occ, k, it->second(k, level) * a);
  }
  return out;
}

/// Couples the fermions to the counter prepared in `initial_level` for one interaction time.
inline JointState interact(const FockVector& v, const DetectorCoupling& coupling, int initial_level = 0) {
  if (v.basis().num_modes() != 2) throw DomainError("interact: basis must have two spatial modes");
  if (coupling.levels < v.n_particles() + 1)
    throw DomainError("interact: need at least N + 1 detector levels to avoid aliasing counts");
  return evolve(JointState::product(v, coupling.levels, initial_level), coupling, coupling.tau);
}

/// ρ_ff = Tr_detector |J⟩⟨J|.
inline SectorDensityMatrix trace_out_detector(const JointState& j) {
  const auto kets = sector_basis(j.basis().size(), j.n_particles());
  const auto index = index_of(kets);
  std::map<int, std::vector<std::pair<Eigen::Index, Complex>>> by_level;
  for (const auto& [key, a] : j) by_level[key.second].emplace_back(index.at(key.first), a);
  const auto dim = static_cast<Eigen::Index>(kets.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [level, column] : by_level)
    for (const auto& [r, ar] : column)
      for (const auto& [c, ac] : column) rho(r, c) += ar * std::conj(ac);
  return {j.basis(), j.n_particles(), std::move(rho)};
}

/// Projects the counter onto |level⟩ and returns the renormalized fermion state.
inline Projection readout(const JointState& j, int level) {
  if (level < 0 || level >= j.levels()) throw DomainError("readout: detector level out of range");
  FockVector kept(j.basis(), j.n_particles());
  for (const auto& [key, a] : j)
    if (key.second == level) kept.add(key.first, a);
  const double prob = kept.norm_squared();
  if (prob == 0.0) return {kept, 0.0};
  return {kept.normalized(), prob};
}

}  // namespace fermient

// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file entanglement.hpp
 * @brief Particle-bipartition Schmidt analysis, Slater detection and fermionic concurrence.
 *
 * The central object is the particle-cut matrix W of an N-fermion state |v⟩ for
 * the (M : N-M) bipartition,
 *
 *   W[L][R] = C(N,M)^{-1/2} ⟨R| f_{l_M} ... f_{l_1} |v⟩,
 *
 * indexed by M-subsets L and (N-M)-subsets R in lexicographic order. With
 * |v⟩ = Σ_S a_S |S⟩ this is C(N,M)^{-1/2} sign(L,R) a_{L∪R}, and
 * |v⟩ = Σ W[L][R] |L⟩|R⟩ in normalized Slater kets of each factor. Its singular
 * values are the Schmidt coefficients and W W† is the M-particle reduced
 * density matrix (unit trace).
 */

#pragma once

#include "fermient/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace fermient {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Singular values below this count as zero when computing numerical ranks.
inline constexpr double kRankThreshold = 1e-8;

// ============================================================================
// Combinatorics
// ============================================================================

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline BigInt factorial_big(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double binomial_double(int n, int k) { return binomial(n, k).convert_to<double>(); }

namespace detail {

inline void require_closed_form_range(int n, int m) {
  if (m < 1 || m > n - m) throw DomainError("closed forms require 1 <= M <= N - M");
}

/// N! / (n! (M-n)! (N-M)!): ways to split N labels into sets of size n, M-n, N-M.
inline BigInt three_set_partitions(int n_total, int m, int n) {
  return factorial_big(n_total) / (factorial_big(n) * factorial_big(m - n) * factorial_big(n_total - m));
}

}  // namespace detail

/// Σ_{n=0}^{M} [N!/(n!(M-n)!(N-M)!)] C(N-M, M-n)² C(N,M)^{-4}, exactly.
inline Rational predicted_purity(int n_total, int m) {
  detail::require_closed_form_range(n_total, m);
  BigInt numerator = 0;
  for (int n = 0; n <= m; ++n) {
    const BigInt b = binomial(n_total - m, m - n);
    numerator += detail::three_set_partitions(n_total, m, n) * b * b;
  }
  const BigInt c = binomial(n_total, m);
  return Rational(numerator, c * c * c * c);
}

/// Σ_{n=0}^{M} N!/(n!(M-n)!(N-M)!), which equals 2^M C(N,M).
inline std::uint64_t predicted_rank(int n_total, int m) {
  detail::require_closed_form_range(n_total, m);
  BigInt total = 0;
  for (int n = 0; n <= m; ++n) total += detail::three_set_partitions(n_total, m, n);
  if (total > BigInt(std::numeric_limits<std::uint64_t>::max())) throw DomainError("predicted_rank: overflow");
  return total.convert_to<std::uint64_t>();
}

/// Multiset of Schmidt coefficients C(N-M, M-n)^{1/2} / C(N,M), each repeated
/// N!/(n!(M-n)!(N-M)!) times, sorted descending.
inline std::vector<double> predicted_schmidt_coefficients(int n_total, int m) {
  detail::require_closed_form_range(n_total, m);
  std::vector<double> out;
  const double c = binomial_double(n_total, m);
  for (int n = 0; n <= m; ++n) {
    const double value = std::sqrt(binomial_double(n_total - m, m - n)) / c;
    const auto copies = detail::three_set_partitions(n_total, m, n).convert_to<std::size_t>();
    out.insert(out.end(), copies, value);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// ============================================================================
// Particle cut, reduced density matrices, spectra
// ============================================================================

inline void require_particle_cut(const FockVector& v, int m) {
  if (m < 1 || m > v.n_particles() - 1) throw DomainError("particle cut: M must satisfy 1 <= M <= N-1");
}

/// W[L][R] as described in the file comment.
inline Eigen::MatrixXcd particle_cut_matrix(const FockVector& v, int m) {
  require_particle_cut(v, m);
  const int d = v.basis().size();
  const int n = v.n_particles();
  const auto rows = sector_basis(d, m);
  const auto col_index = index_of(sector_basis(d, n - m));
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(col_index.size()));
  const double scale = 1.0 / std::sqrt(binomial_double(n, m));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    FockVector rest = v;
    for (int orbital : rows[r].orbitals()) {
      rest = apply_annihilation(orbital, rest);
      if (rest.is_zero()) break;
    }
    for (const auto& [occ, a] : rest) w(static_cast<Eigen::Index>(r), col_index.at(occ)) = scale * a;
  }
  return w;
}

/// ρ_M = Tr_{N-M} |v⟩⟨v| on the antisymmetric M-particle sector.
inline Eigen::MatrixXcd m_particle_rdm(const FockVector& v, int m) {
  const Eigen::MatrixXcd w = particle_cut_matrix(v, m);
  return w * w.adjoint();
}

/// Tr ρ².
inline double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

inline std::vector<double> singular_values_descending(const Eigen::MatrixXcd& mat) {
  if (mat.size() == 0) return {};
  // BDCSVD in Eigen 3.4 drops members of degenerate clusters on some complex
  // inputs (e.g. phase-rotated Slater determinants); Jacobi is exact enough here.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
  const Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Schmidt coefficients of the (M : N-M) particle cut, descending (zeros included).
inline std::vector<double> schmidt_spectrum(const FockVector& v, int m) {
  return singular_values_descending(particle_cut_matrix(v, m));
}

inline int numerical_rank(const std::vector<double>& spectrum, double threshold = kRankThreshold) {
  return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(), [&](double s) { return s > threshold; }));
}

/// Slater test: Tr ρ_M² = C(N,M)^{-1}, the maximum, holds exactly on Slater determinants.
inline bool is_slater(const FockVector& v, int m = 1, double tol = kEqualityTolerance) {
  const double nrm2 = v.norm_squared();
  if (nrm2 == 0.0) throw DomainError("is_slater: zero vector");
  const double p = purity(m_particle_rdm(v, m)) / (nrm2 * nrm2);
  return std::abs(p - 1.0 / binomial_double(v.n_particles(), m)) <= tol;
}

/// 1 - Tr ρ₁² with the unit-trace single-particle density matrix.
inline double linear_entropy_single(const FockVector& v) { return 1.0 - purity(m_particle_rdm(v, 1)); }

/// 1 - N Tr ρ₁²: zero on Slater determinants. For two fermions held in different
/// wells this equals the linear entropy of the effective distinguishable state.
inline double fermionic_linear_entropy(const FockVector& v) {
  return 1.0 - v.n_particles() * purity(m_particle_rdm(v, 1));
}

// ============================================================================
// Schmidt decomposition with labels
// ============================================================================

struct SchmidtEntry {
  double lambda;                      ///< nonnegative Schmidt coefficient
  int n_left_in_a;                    ///< particles of the left factor in mode 0, -1 if indefinite
  std::optional<Occupation> left_label;  ///< set when the left factor is a single Slater ket
  FockVector left;                    ///< normalized M-particle state
  FockVector right;                   ///< normalized (N-M)-particle state
};

struct SchmidtResult {
  int n_particles;
  int m;
  std::vector<SchmidtEntry> entries;  ///< sorted by (n, lambda descending, left label)

  [[nodiscard]] std::vector<double> coefficients() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.lambda);
    return out;
  }
};

namespace detail {

inline int definite_mode_count(const FockVector& v, std::uint64_t mask) {
  int n = -1;
  for (const auto& [occ, a] : v) {
    const int k = occ.count_in(mask);
    if (n == -1) n = k;
    else if (n != k) return -1;
  }
  return n;
}

}  // namespace detail

/**
 * Schmidt decomposition of the (M : N-M) particle cut, entries above the rank
 * threshold only.
 *
 * When the rows of W are mutually orthogonal the left factors are single
 * M-particle Slater kets (any sign lives in the right factor); otherwise the
 * factors come from the SVD of W.
 */
inline SchmidtResult schmidt_decomposition(const FockVector& v, int m, double threshold = kRankThreshold) {
  const Eigen::MatrixXcd w = particle_cut_matrix(v, m);
  const OrbitalBasis& basis = v.basis();
  const int n = v.n_particles();
  const auto left_kets = sector_basis(basis.size(), m);
  const auto right_kets = sector_basis(basis.size(), n - m);
  const std::uint64_t mask_a = basis.mode_mask(0);

  auto row_vector = [&](const Eigen::VectorXcd& col, int particles, const std::vector<Occupation>& kets) {
    FockVector out(basis, particles);
    for (Eigen::Index i = 0; i < col.size(); ++i) out.add(kets[static_cast<std::size_t>(i)], col(i));
    return out;
  };

  SchmidtResult result{n, m, {}};
  const Eigen::MatrixXcd gram = w * w.adjoint();
  const Eigen::MatrixXcd off = gram - Eigen::MatrixXcd(gram.diagonal().asDiagonal());
  const bool rows_orthogonal = off.size() == 0 || off.cwiseAbs().maxCoeff() < kEqualityTolerance;

  if (rows_orthogonal) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      const double lambda = w.row(r).norm();
      if (lambda <= threshold) continue;
      const Occupation label = left_kets[static_cast<std::size_t>(r)];
      FockVector left(basis, m);
      left.add(label, 1.0);
      const Eigen::VectorXcd right_col = w.row(r).transpose() / lambda;
      result.entries.push_back({lambda, label.count_in(mask_a), label, std::move(left),
                                row_vector(right_col, n - m, right_kets)});
    }
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (s(k) <= threshold) continue;
      FockVector left = row_vector(svd.matrixU().col(k), m, left_kets);
      FockVector right = row_vector(svd.matrixV().col(k).conjugate(), n - m, right_kets);
      std::optional<Occupation> label;
      if (left.nonzero_count() == 1) label = left.begin()->first;
      const int n_left = detail::definite_mode_count(left, mask_a);
      result.entries.push_back({s(k), n_left, label, std::move(left), std::move(right)});
    }
  }

  std::stable_sort(result.entries.begin(), result.entries.end(), [](const SchmidtEntry& a, const SchmidtEntry& b) {
    if (a.n_left_in_a != b.n_left_in_a) return a.n_left_in_a < b.n_left_in_a;
    if (std::abs(a.lambda - b.lambda) > kEqualityTolerance) return a.lambda > b.lambda;
    const Occupation la = a.left_label.value_or(a.left.begin()->first);
    const Occupation lb = b.left_label.value_or(b.left.begin()->first);
    return la < lb;
  });
  return result;
}

// ============================================================================
// Effective distinguishable-party states
// ============================================================================

/// |ψ⟩_eff = Σ c_ij |i⟩_A ⊗ |j⟩_B over internal levels.
struct EffectiveBipartiteState {
  Eigen::MatrixXcd c;

  [[nodiscard]] std::vector<double> schmidt_coefficients() const { return singular_values_descending(c); }
  [[nodiscard]] double alice_purity() const { return purity(c * c.adjoint()); }
  [[nodiscard]] double linear_entropy() const { return 1.0 - alice_purity(); }
};

/// Alice holds M particles (internal-level subsets of mode A), Bob N-M (mode B).
struct EffectiveSplitState {
  std::vector<Occupation> alice_labels;  ///< M-subsets of internal levels, lexicographic
  std::vector<Occupation> bob_labels;    ///< (N-M)-subsets of internal levels, lexicographic
  Eigen::MatrixXcd alpha;                ///< alpha(alice, bob)

  [[nodiscard]] double alice_purity() const { return purity(alpha * alpha.adjoint()); }
  [[nodiscard]] double linear_entropy() const { return 1.0 - alice_purity(); }
};

/// Coefficients of f†_{A,levels} f†_{B,levels} |0⟩ for a state with exactly M
/// particles in mode A. The canonical order puts A orbitals first, so these are
/// the stored amplitudes.
inline EffectiveSplitState effective_state_general(const FockVector& v, int m) {
  const OrbitalBasis& basis = v.basis();
  if (basis.num_modes() != 2) throw DomainError("effective_state_general: basis must have two spatial modes");
  if (m < 0 || m > v.n_particles()) throw DomainError("effective_state_general: M out of range");
  const int levels = basis.internal_dim();
  const std::uint64_t mask_a = basis.mode_mask(0);
  EffectiveSplitState out;
  out.alice_labels = sector_basis(levels, m);
  out.bob_labels = sector_basis(levels, v.n_particles() - m);
  const auto alice_index = index_of(out.alice_labels);
  const auto bob_index = index_of(out.bob_labels);
  out.alpha = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out.alice_labels.size()),
                                     static_cast<Eigen::Index>(out.bob_labels.size()));
  for (const auto& [occ, a] : v) {
    if (occ.count_in(mask_a) != m) throw DomainError("effective_state_general: support outside the (M, N-M) sector");
    const Occupation alice(occ.bits() & mask_a);
    const Occupation bob((occ.bits() & ~mask_a) >> levels);
    out.alpha(alice_index.at(alice), bob_index.at(bob)) = a;
  }
  return out;
}

/// Two fermions, one in each well: c_ij = amplitude of f†_{A,i} f†_{B,j} |0⟩.
inline EffectiveBipartiteState effective_state(const FockVector& v) {
  if (v.n_particles() != 2) throw DomainError("effective_state: requires two fermions");
  return {effective_state_general(v, 1).alpha};
}

// ============================================================================
// Two-fermion concurrence (single-particle dimension 4)
// ============================================================================

namespace detail {

inline void require_two_fermions_d4(const OrbitalBasis& basis, int n) {
  if (n != 2 || basis.size() != 4) throw DomainError("concurrence: defined only for N = 2, d = 4");
}

}  // namespace detail

/// Real symmetric involution D on the 6-dim sector (lexicographic kets
/// {01},{02},{03},{12},{13},{23}) with a^T D a = 2 Pf(a).
inline Eigen::Matrix<double, 6, 6> two_fermion_dual() {
  Eigen::Matrix<double, 6, 6> d = Eigen::Matrix<double, 6, 6>::Zero();
  d(0, 5) = d(5, 0) = 1.0;   // {01} <-> {23}
  d(1, 4) = d(4, 1) = -1.0;  // {02} <-> {13}
  d(2, 3) = d(3, 2) = 1.0;   // {03} <-> {12}
  return d;
}

/// C = 2 |a01 a23 - a02 a13 + a03 a12| / ‖a‖² over canonical ket amplitudes.
inline double concurrence_pure(const FockVector& v) {
  detail::require_two_fermions_d4(v.basis(), v.n_particles());
  const double nrm2 = v.norm_squared();
  if (nrm2 == 0.0) throw DomainError("concurrence_pure: zero vector");
  auto a = [&](int i, int j) { return v.amplitude(Occupation::from_orbitals({i, j})); };
  const Complex pfaffian = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
  return 2.0 * std::abs(pfaffian) / nrm2;
}

/**
 * Convex-roof concurrence of a two-fermion density matrix (d = 4):
 * C = max(0, μ1 - μ2 - ... - μ6), μ the singular values of τ = Vᵀ D V with
 * ρ = V V† from the eigendecomposition and D the dual of two_fermion_dual().
 */
inline double concurrence_mixed(const SectorDensityMatrix& rho) {
  detail::require_two_fermions_d4(rho.basis, rho.n_particles);
  const Eigen::MatrixXcd& r = rho.rho;
  if (r.rows() != 6 || r.cols() != 6) throw DomainError("concurrence_mixed: expected a 6x6 matrix");
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > kEqualityTolerance)
    throw DomainError("concurrence_mixed: matrix is not Hermitian");
  if (std::abs(r.trace() - Complex(1.0)) > kEqualityTolerance)
    throw DomainError("concurrence_mixed: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
  const Eigen::VectorXd e = eig.eigenvalues();
  if (e.minCoeff() < -kEqualityTolerance) throw DomainError("concurrence_mixed: matrix is not positive semidefinite");
  Eigen::MatrixXcd v = eig.eigenvectors();
  for (Eigen::Index k = 0; k < 6; ++k) {
    // Round-off eigenvalues would otherwise enter τ at the square-root scale.
    const double weight = e(k) < 1e-13 ? 0.0 : e(k);
    v.col(k) *= std::sqrt(weight);
  }
  const Eigen::MatrixXcd tau = v.transpose() * two_fermion_dual().cast<Complex>() * v;
  const std::vector<double> mu = singular_values_descending(tau);
  double c = mu[0];
  for (std::size_t k = 1; k < mu.size(); ++k) c -= mu[k];
  return std::max(0.0, c);
}

}  // namespace fermient

// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file firstq.hpp
 * @brief Dense first-quantized tensors: brute-force cross-check of the Fock code.
 *
 * A tensor over N particle slots, each ranging over the d single-particle
 * orbitals, stored row-major with particle 1 as the slowest index. Nothing
 * here calls into the sparse Fock routines except the explicit
 * `to_first_quantized` bridge, which only reads amplitudes.
 */

#pragma once

#include "fermient/fock.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fermient {

/// Raised when a request exceeds the oracle's size cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

inline int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return (inversions & 1) ? -1 : 1;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace detail

class FirstQuantizedTensor {
 public:
  static constexpr int kMaxParticles = 5;
  static constexpr int kMaxDim = 10;

  FirstQuantizedTensor(int n_particles, int dim) : n_(n_particles), d_(dim) {
    if (n_ < 1 || d_ < 1) throw DomainError("FirstQuantizedTensor: N and d must be positive");
    if (n_ > kMaxParticles || d_ > kMaxDim)
      throw SizeError("FirstQuantizedTensor: oracle is capped at N <= 5 and d <= 10 (requested N=" +
                      std::to_string(n_) + ", d=" + std::to_string(d_) + ")");
    data_.assign(detail::ipow(d_, n_), Complex{});
  }

  /// |phi_1⟩ ⊗ ... ⊗ |phi_N⟩ for single-particle column vectors.
  static FirstQuantizedTensor product(const std::vector<Eigen::VectorXcd>& factors) {
    if (factors.empty()) throw DomainError("product: no factors");
    const int d = static_cast<int>(factors.front().size());
    FirstQuantizedTensor t(static_cast<int>(factors.size()), d);
    for (const auto& f : factors)
      if (f.size() != d) throw DomainError("product: factor dimension mismatch");
    std::vector<int> idx(factors.size(), 0);
    for (std::size_t flat = 0; flat < t.data_.size(); ++flat) {
      t.unflatten(flat, idx);
      Complex a = 1.0;
      for (std::size_t k = 0; k < factors.size(); ++k) a *= factors[k](idx[k]);
      t.data_[flat] = a;
    }
    return t;
  }

  /// Product of basis kets |i_1, ..., i_N⟩.
  static FirstQuantizedTensor basis_product(int dim, const std::vector<int>& orbitals) {
    FirstQuantizedTensor t(static_cast<int>(orbitals.size()), dim);
    t.at(orbitals) = 1.0;
    return t;
  }

  [[nodiscard]] int n_particles() const noexcept { return n_; }
  [[nodiscard]] int dim() const noexcept { return d_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] const std::vector<Complex>& data() const noexcept { return data_; }
  std::vector<Complex>& data() noexcept { return data_; }

  [[nodiscard]] std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int i : idx) {
      if (i < 0 || i >= d_) throw DomainError("FirstQuantizedTensor: index out of range");
      flat = flat * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i);
    }
    return flat;
  }
  void unflatten(std::size_t flat, std::vector<int>& idx) const {
    idx.resize(static_cast<std::size_t>(n_));
    for (int k = n_ - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(d_));
      flat /= static_cast<std::size_t>(d_);
    }
  }

  Complex& at(const std::vector<int>& idx) {
    if (static_cast<int>(idx.size()) != n_) throw DomainError("FirstQuantizedTensor: wrong index arity");
    return data_[flatten(idx)];
  }
  [[nodiscard]] Complex at(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != n_) throw DomainError("FirstQuantizedTensor: wrong index arity");
    return data_[flatten(idx)];
  }

  [[nodiscard]] double norm_squared() const noexcept {
    double s = 0.0;
    for (const Complex& a : data_) s += std::norm(a);
    return s;
  }

  [[nodiscard]] FirstQuantizedTensor scaled(Complex factor) const {
    FirstQuantizedTensor out = *this;
    for (Complex& a : out.data_) a *= factor;
    return out;
  }

  /// Copy with particle slots reordered: out[i_{perm(0)}, ..., i_{perm(N-1)}] = this[i_0, ..., i_{N-1}].
  [[nodiscard]] FirstQuantizedTensor permuted(const std::vector<int>& perm) const {
    FirstQuantizedTensor out(n_, d_);
    std::vector<int> idx, moved(static_cast<std::size_t>(n_));
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      unflatten(flat, idx);
      for (int k = 0; k < n_; ++k) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = idx[static_cast<std::size_t>(k)];
      out.data_[out.flatten(moved)] = data_[flat];
    }
    return out;
  }

  void require_same_shape(const FirstQuantizedTensor& o) const {
    if (n_ != o.n_ || d_ != o.d_) throw DomainError("FirstQuantizedTensor: shape mismatch");
  }

 private:
  int n_;
  int d_;
  std::vector<Complex> data_;
};

inline Complex inner_product(const FirstQuantizedTensor& u, const FirstQuantizedTensor& v) {
  u.require_same_shape(v);
  Complex s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u.data()[i]) * v.data()[i];
  return s;
}

inline double max_abs_difference(const FirstQuantizedTensor& u, const FirstQuantizedTensor& v) {
  u.require_same_shape(v);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u.data()[i] - v.data()[i]));
  return worst;
}

/// Unnormalized antisymmetrizer: sum over all N! slot permutations weighted by sign.
inline FirstQuantizedTensor antisymmetrize(const FirstQuantizedTensor& t) {
  FirstQuantizedTensor out(t.n_particles(), t.dim());
  std::vector<int> perm(static_cast<std::size_t>(t.n_particles()));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const double sign = detail::permutation_sign(perm);
    const FirstQuantizedTensor p = t.permuted(perm);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += sign * p.data()[i];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Σ_S amplitude(S) (1/√N!) 𝒜|s_1, ..., s_N⟩ with s ascending.
inline FirstQuantizedTensor to_first_quantized(const FockVector& v) {
  const int n = v.n_particles();
  const int d = v.basis().size();
  FirstQuantizedTensor out(n, d);
  const double scale = 1.0 / std::sqrt(detail::factorial(n));
  std::vector<int> perm(static_cast<std::size_t>(n)), idx(static_cast<std::size_t>(n));
  for (const auto& [occ, a] : v) {
    const std::vector<int> orbs = occ.orbitals();
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int k = 0; k < n; ++k) idx[static_cast<std::size_t>(k)] = orbs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
      out.at(idx) += static_cast<double>(detail::permutation_sign(perm)) * scale * a;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

/// The tensor viewed as a d^M x d^(N-M) matrix over the (first M slots : rest) cut.
inline Eigen::MatrixXcd particle_cut_reshape(const FirstQuantizedTensor& t, int m) {
  if (m < 1 || m > t.n_particles() - 1) throw DomainError("particle cut: M must satisfy 1 <= M <= N-1");
  const auto rows = static_cast<Eigen::Index>(detail::ipow(t.dim(), m));
  const auto cols = static_cast<Eigen::Index>(detail::ipow(t.dim(), t.n_particles() - m));
  Eigen::MatrixXcd mat(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = t.data()[static_cast<std::size_t>(r * cols + c)];
  return mat;
}

/// Singular values of the particle-cut reshape, descending.
inline std::vector<double> particle_bipartition_svd(const FirstQuantizedTensor& t, int m) {
  const Eigen::MatrixXcd mat = particle_cut_reshape(t, m);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
  const Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Partial trace over the last N-M particle slots.
inline Eigen::MatrixXcd reduced_density_firstq(const FirstQuantizedTensor& t, int m) {
  const Eigen::MatrixXcd mat = particle_cut_reshape(t, m);
  return mat * mat.adjoint();
}

/// U ⊗ ... ⊗ U applied slot by slot.
inline FirstQuantizedTensor apply_each_slot(const Eigen::MatrixXcd& u, const FirstQuantizedTensor& t) {
  if (u.rows() != t.dim() || u.cols() != t.dim()) throw DomainError("apply_each_slot: dimension mismatch");
  FirstQuantizedTensor cur = t;
  const std::size_t d = static_cast<std::size_t>(t.dim());
  for (int slot = 0; slot < t.n_particles(); ++slot) {
    FirstQuantizedTensor next(t.n_particles(), t.dim());
    const std::size_t stride = detail::ipow(t.dim(), t.n_particles() - 1 - slot);
    for (std::size_t flat = 0; flat < cur.size(); ++flat) {
      const Complex a = cur.data()[flat];
      if (a == Complex{}) continue;
      const std::size_t i = (flat / stride) % d;
      const std::size_t base = flat - i * stride;
      for (std::size_t k = 0; k < d; ++k)
        next.data()[base + k * stride] += u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * a;
    }
    cur = std::move(next);
  }
  return cur;
}

/// Probability of finding (n_A, n_B) particles in modes 0 and 1, from per-slot
/// mode projectors. Requires a two-mode, mode-major layout of the d orbitals.
inline std::map<std::pair<int, int>, double> mode_count_probabilities(const FirstQuantizedTensor& t,
                                                                     int internal_dim) {
  if (t.dim() != 2 * internal_dim) throw DomainError("mode_count_probabilities: expected two modes");
  std::map<std::pair<int, int>, double> out;
  std::vector<int> idx;
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const double w = std::norm(t.data()[flat]);
    if (w == 0.0) continue;
    t.unflatten(flat, idx);
    int in_a = 0;
    for (int i : idx) in_a += i < internal_dim ? 1 : 0;
    out[{in_a, t.n_particles() - in_a}] += w;
  }
  return out;
}

}  // namespace fermient

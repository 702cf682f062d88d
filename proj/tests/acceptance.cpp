// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate. Prints one PASS/FAIL line per criterion (plus indented
// detail lines) and exits nonzero if any selected criterion fails.
//
//   acceptance            run all criteria
//   acceptance --only 5   run one criterion

#include "fermient/fermient.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>

using namespace fermient;

namespace {

// Tolerances pinned here, one per quantity.
constexpr double kSlaterPurityTol = 1e-10;     // 1
constexpr double kTwoElectronTol = 1e-10;      // 2
constexpr double kEntropyTol = 1e-12;          // 3
constexpr double kCountingTol = 1e-12;         // 4
constexpr double kRankThresholdAcc = 1e-8;     // 5
constexpr double kClosedFormTol = 1e-10;       // 5
constexpr double kDetectorTol = 1e-10;         // 6
constexpr double kMixedConcurrenceTol = 1e-9;  // 6
constexpr double kReadoutTol = 1e-10;          // 7
constexpr double kConvexRoofTol = 5e-3;        // 8

struct Outcome {
  bool passed = true;
  std::string summary;
};

void detail_line(const std::string& s) { std::printf("    %s\n", s.c_str()); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FockVector all_in_a(const OrbitalBasis& basis, int n) {
  std::vector<int> orbs;
  for (int k = 0; k < n; ++k) orbs.push_back(basis.orbital(0, k));
  return slater_state(basis, orbs);
}

// ---------------------------------------------------------------------------

Outcome slater_invariance() {
  double worst = 0.0;
  bool all_slater = true;
  for (int n = 2; n <= 5; ++n) {
    const OrbitalBasis b = OrbitalBasis::two_mode(n);
    for (int i = 0; i <= 10; ++i) {
      const double p = i / 10.0;
      const FockVector v = lift_unitary(make_split(b, p), all_in_a(b, n));
      worst = std::max(worst, std::abs(purity(m_particle_rdm(v, 1)) - 1.0 / n));
      all_slater = all_slater && is_slater(v, 1, kSlaterPurityTol);
    }
  }
  return {all_slater && worst <= kSlaterPurityTol,
          fmt("44 states, max |Tr rho1^2 - 1/N| = %.2e (tol %.0e)", worst, kSlaterPurityTol)};
}

Outcome two_electron() {
  double worst_c = 0.0, worst_s = 0.0, worst_f = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double p = i / 10.0;
    const GridPoint g = scenario_two_electron(p, kTwoElectronTol);
    for (const Check& c : g.checks) {
      if (c.name == "proj_concurrence") worst_c = std::max(worst_c, c.residual());
      if (c.name == "proj_schmidt_deviation") worst_s = std::max(worst_s, c.residual());
      if (c.name == "effective_bell_fidelity") worst_f = std::max(worst_f, c.residual());
    }
  }
  detail_line(fmt("|C - 1| max %.2e, Schmidt deviation max %.2e, 1 - F max %.2e", worst_c, worst_s, worst_f));
  return {worst_c <= kTwoElectronTol && worst_s <= kTwoElectronTol && worst_f <= kTwoElectronTol,
          fmt("9 p values, worst residual %.2e (tol %.0e)", std::max({worst_c, worst_s, worst_f}), kTwoElectronTol)};
}

Outcome entropy_equality() {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int levels = 2 + trial % 3;
    const OrbitalBasis b = OrbitalBasis::two_mode(levels);
    FockVector v(b, 2);
    for (int i = 0; i < levels; ++i)
      for (int j = 0; j < levels; ++j)
        v.add(Occupation::from_orbitals({b.orbital(0, i), b.orbital(1, j)}), testing::random_complex(rng));
    v = v.normalized();
    worst = std::max(worst, std::abs(fermionic_linear_entropy(v) - effective_state(v).linear_entropy()));
  }
  return {worst < kEntropyTol, fmt("100 random states, max |S_f - S_eff| = %.2e (tol %.0e)", worst, kEntropyTol)};
}

Outcome counting_certification() {
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const GridPoint g = scenario_certification(i / 10.0, kCountingTol);
    for (const Check& c : g.checks) worst = std::max(worst, c.residual());
  }
  return {worst < kCountingTol, fmt("9 p values x 6 probabilities, max residual %.2e (tol %.0e)", worst, kCountingTol)};
}

Outcome closed_forms() {
  bool ok = true;
  int failing = 0;
  for (int n = 2; n <= 5; ++n) {
    for (int m = 1; m <= n - m; ++m) {
      const OrbitalBasis b = OrbitalBasis::two_mode(n);
      const FockVector v = project_mode_count(lift_unitary(make_split(b, 0.5), all_in_a(b, n)), "A", m).state;
      const int rank = numerical_rank(schmidt_spectrum(v, m), kRankThresholdAcc);
      const std::uint64_t want_rank = predicted_rank(n, m);
      const double pur = purity(m_particle_rdm(v, m));
      const Rational want_pur = predicted_purity(n, m);
      const double pur_res = std::abs(pur - want_pur.convert_to<double>());

      const auto oracle = particle_bipartition_svd(to_first_quantized(v), m);
      const auto predicted = predicted_schmidt_coefficients(n, m);
      double multiset = 0.0;
      for (std::size_t k = 0; k < std::max(oracle.size(), predicted.size()); ++k) {
        const double a = k < oracle.size() ? oracle[k] : 0.0;
        const double e = k < predicted.size() ? predicted[k] : 0.0;
        multiset = std::max(multiset, std::abs(a - e));
      }
      const bool row_ok = rank == static_cast<int>(want_rank) && pur_res <= kClosedFormTol && multiset <= kClosedFormTol;
      if (!row_ok) ++failing;
      ok = ok && row_ok;
      detail_line(fmt("(N=%d, M=%d) rank %d vs %llu, purity %.12f vs %s, multiset dev %.2e  %s", n, m, rank,
                      static_cast<unsigned long long>(want_rank), pur, want_pur.str().c_str(), multiset,
                      row_ok ? "ok" : "MISMATCH"));
    }
  }
  return {ok, fmt("6 (N,M) cases, %d mismatching the closed forms", failing)};
}

Outcome detector_model() {
  const OrbitalBasis b = OrbitalBasis::two_mode(2);
  const DetectorCoupling coupling = build_coupling(3, 1.0);
  double endpoint = 0.0;
  for (int n = 0; n <= 2; ++n) {
    std::vector<int> orbs;
    for (int k = 0; k < n; ++k) orbs.push_back(b.orbital(0, k));
    for (int k = n; k < 2; ++k) orbs.push_back(b.orbital(1, k));
    const FockVector phi = slater_state(b, orbs);
    const JointState j = interact(phi, coupling);
    for (int level = 0; level < 3; ++level) {
      const double want = level == n ? 1.0 : 0.0;
      for (const auto& [occ, a] : phi) endpoint = std::max(endpoint, std::abs(j.amplitude(occ, level) - want * a));
    }
  }
  detail_line(fmt("endpoint table |Phi_n>|0> -> |Phi_n>|n>: max deviation %.2e", endpoint));
  bool ok = endpoint <= kDetectorTol;
  for (double p : {0.2, 0.5, 0.8}) {
    const GridPoint g = scenario_detector(p, 3, kDetectorTol);
    double amp = 0.0, mixed = 0.0, pure = 0.0;
    for (const Check& c : g.checks) {
      if (c.name.rfind("amp_", 0) == 0) amp = std::max(amp, c.residual());
      if (c.name == "mixed_concurrence") mixed = c.value;
      if (c.name == "readout1_concurrence") pure = c.value;
    }
    const bool row = amp <= kDetectorTol && std::abs(mixed) <= kMixedConcurrenceTol && std::abs(pure - 1.0) <= kDetectorTol;
    ok = ok && row;
    detail_line(fmt("p=%.1f amplitudes dev %.2e, C(rho_ff) = %.2e, C(readout 1) = %.15f", p, amp, mixed, pure));
  }
  return {ok, "endpoint table, interaction amplitudes and concurrences at p = 0.2, 0.5, 0.8"};
}

Outcome readout_equivalence() {
  std::mt19937_64 rng(7);
  double worst_p = 0.0, worst_f = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    const OrbitalBasis b = OrbitalBasis::two_mode(2 + trial % 3);
    const FockVector v = testing::random_state(b, n, rng);
    const JointState j = interact(v, build_coupling(n + 1, 1.0));
    for (int count = 0; count <= n; ++count) {
      const Projection r = readout(j, count);
      const Projection p = project_mode_count(v, "A", count);
      worst_p = std::max(worst_p, std::abs(r.probability - p.probability));
      if (p.probability > 0.0) worst_f = std::max(worst_f, 1.0 - fidelity(r.state, p.state));
    }
  }
  return {worst_p <= kReadoutTol && worst_f <= kReadoutTol,
          fmt("50 random states, max |dP| = %.2e, max 1 - F = %.2e (tol %.0e)", worst_p, worst_f, kReadoutTol)};
}

// Brute-force convex roof. With rho = V V† (V is 6 x r) every K-element
// decomposition is psi_k = Σ_j V_j U_jk for an r x K matrix with orthonormal
// rows, and p_k C(psi_k) = |(Uᵀ τ U)_kk| with τ = Vᵀ D V.
class ConvexRoofSearch {
 public:
  ConvexRoofSearch(const Eigen::MatrixXcd& rho, std::mt19937_64& rng) : rng_(rng) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
    std::vector<Eigen::VectorXcd> cols;
    for (Eigen::Index k = 0; k < 6; ++k)
      if (eig.eigenvalues()(k) > 1e-13) cols.push_back(eig.eigenvectors().col(k) * std::sqrt(eig.eigenvalues()(k)));
    v_.resize(6, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) v_.col(static_cast<Eigen::Index>(k)) = cols[k];
    tau_ = v_.transpose() * two_fermion_dual().cast<Complex>() * v_;
  }

  double average(const Eigen::MatrixXcd& u) const {
    const Eigen::MatrixXcd t = u.transpose() * tau_ * u;
    double s = 0.0;
    for (Eigen::Index k = 0; k < t.rows(); ++k) s += std::abs(t(k, k));
    return s;
  }

  double minimize(int restarts) {
    const auto r = v_.cols();
    double best = std::numeric_limits<double>::infinity();
    for (int k_size : {2, 3, 4}) {
      if (k_size < r) continue;
      Eigen::MatrixXcd best_u;
      double best_k = std::numeric_limits<double>::infinity();
      for (int i = 0; i < restarts; ++i) {
        // Rows of a K x K unitary, transposed: r x K with orthonormal rows.
        const Eigen::MatrixXcd u = testing::random_unitary(k_size, rng_).topRows(r);
        const double a = average(u);
        if (a < best_k) {
          best_k = a;
          best_u = u;
        }
      }
      best = std::min(best, refine(best_u, k_size));
    }
    return best;
  }

 private:
  // Right-multiplication by near-identity unitaries keeps the rows orthonormal.
  // A fixed number of proposals per step size, then the step is halved.
  double refine(Eigen::MatrixXcd u, int k_size) {
    double cur = average(u);
    std::normal_distribution<double> g;
    for (double step = 0.3; step > 1e-6; step *= 0.5) {
      for (int attempt = 0; attempt < 300; ++attempt) {
        Eigen::MatrixXcd h(k_size, k_size);
        for (int i = 0; i < k_size; ++i)
          for (int j = 0; j < k_size; ++j) h(i, j) = Complex(g(rng_), g(rng_));
        h = 0.5 * (h + h.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
        Eigen::VectorXcd ph(k_size);
        for (int i = 0; i < k_size; ++i) ph(i) = std::polar(1.0, step * eig.eigenvalues()(i));
        const Eigen::MatrixXcd cand = u * (eig.eigenvectors() * ph.asDiagonal() * eig.eigenvectors().adjoint());
        const double a = average(cand);
        if (a < cur) {
          cur = a;
          u = cand;
        }
      }
    }
    return cur;
  }

  std::mt19937_64& rng_;
  Eigen::MatrixXcd v_;
  Eigen::MatrixXcd tau_;
};

Outcome concurrence_oracle() {
  std::mt19937_64 rng(2718);
  const OrbitalBasis b = OrbitalBasis::two_mode(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int rank = trial % 5 == 0 ? 1 : 2;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(6, 6);
    const double w = rank == 1 ? 1.0 : unit(rng);
    for (int k = 0; k < rank; ++k) {
      const Eigen::VectorXcd psi = to_dense(testing::random_state(b, 2, rng));
      rho += (k == 0 ? w : 1.0 - w) * psi * psi.adjoint();
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    const double formula = concurrence_mixed({b, 2, rho});
    ConvexRoofSearch search(rho, rng);
    const double roof = search.minimize(10000);
    worst = std::max(worst, std::abs(formula - roof));
    detail_line(fmt("#%02d rank %d  formula %.6f  search %.6f  diff %.1e", trial, rank, formula, roof, roof - formula));
  }
  return {worst <= kConvexRoofTol, fmt("20 random rank<=2 states, max |formula - search| = %.2e (tol %.0e)", worst, kConvexRoofTol)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<Criterion> criteria{
      {1, "Slater invariance under splitting", slater_invariance},
      {2, "two-electron pipeline", two_electron},
      {3, "fermionic and effective entropies agree", entropy_equality},
      {4, "counting-statistics certification", counting_certification},
      {5, "closed-form Schmidt rank, purity and spectrum", closed_forms},
      {6, "detector model", detector_model},
      {7, "readout equals number projection", readout_equivalence},
      {8, "mixed concurrence vs convex-roof search", concurrence_oracle},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.passed;
    std::printf("[%s] criterion %d: %s -- %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

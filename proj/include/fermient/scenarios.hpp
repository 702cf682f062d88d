// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file scenarios.hpp
 * @brief End-to-end pipelines (split, detect, analyse) with self-checking run records.
 *
 * Each scenario evaluates one grid point and records every computed scalar next
 * to the closed form it should reproduce. A record passes when every residual
 * is within its tolerance.
 */

#pragma once

#include "fermient/detector.hpp"
#include "fermient/entanglement.hpp"
#include "fermient/firstq.hpp"
#include "fermient/fock.hpp"
#include "fermient/io.hpp"
#include "fermient/transforms.hpp"
#include "fermient/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermient {

/// Raised when a scenario configuration violates a precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
  std::string scenario;           ///< two-electron | certify | n-fermion | detector
  std::vector<double> p_grid{0.5};
  int n_particles = 2;
  int m = 1;
  int internal_dim = 0;           ///< 0 selects max(2, N)
  int detector_levels = 3;
  double tolerance = kEqualityTolerance;
  std::string out;                ///< empty: stdout
  std::string format = "json";    ///< json | csv

  [[nodiscard]] int effective_internal_dim() const {
    return internal_dim > 0 ? internal_dim : std::max(2, n_particles);
  }
};

/// "start:stop:count", endpoints inclusive.
inline std::vector<double> parse_p_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos) throw ConfigError("p-grid must look like start:stop:count");
  double start = 0.0, stop = 0.0;
  long count = 0;
  try {
    std::size_t used = 0;
    start = std::stod(text.substr(0, first), &used);
    if (used != first) throw ConfigError("bad p-grid start");
    const std::string stop_text = text.substr(first + 1, second - first - 1);
    stop = std::stod(stop_text, &used);
    if (used != stop_text.size()) throw ConfigError("bad p-grid stop");
    const std::string count_text = text.substr(second + 1);
    count = std::stol(count_text, &used);
    if (used != count_text.size()) throw ConfigError("bad p-grid count");
  } catch (const std::logic_error&) {
    throw ConfigError("p-grid must look like start:stop:count");
  }
  if (count < 1) throw ConfigError("p-grid count must be at least 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) return {start};
  for (long i = 0; i < count; ++i) {
    // Interpolate from both ends so the stop value is hit exactly.
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    grid.push_back(i == count - 1 ? stop : start + (stop - start) * t);
  }
  return grid;
}

/// One scalar compared against its closed form.
struct Check {
  std::string name;
  double value;
  double expected;
  std::string formula;
  double tolerance;

  [[nodiscard]] double residual() const { return std::abs(value - expected); }
  [[nodiscard]] bool passed() const { return residual() <= tolerance; }
};

struct GridPoint {
  double p = 0.0;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> scalars;  ///< reported values without a closed form
  Json details = Json::object();                         ///< non-scalar outputs (matrices, tables)
  Json states = Json::object();                          ///< step name -> state reference

  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
};

struct RunRecord {
  ScenarioConfig config;
  std::vector<GridPoint> points;
  Json state_store = Json::object();  ///< reference -> serialized state
  double elapsed_ms = 0.0;

  [[nodiscard]] bool passed() const {
    return std::all_of(points.begin(), points.end(), [](const GridPoint& g) { return g.passed(); });
  }

  /// Stores a state and records a reference to it under `step` for this point.
  void keep_state(GridPoint& point, const std::string& step, Json serialized) {
    std::ostringstream ref;
    ref << "p=" << std::setprecision(17) << point.p << "/" << step;
    point.states[step] = ref.str();
    state_store[ref.str()] = std::move(serialized);
  }
};

inline Json to_json(const ScenarioConfig& c) {
  return Json{{"scenario", c.scenario},
              {"p_grid", c.p_grid},
              {"n_particles", c.n_particles},
              {"m", c.m},
              {"internal_dim", c.effective_internal_dim()},
              {"detector_levels", c.detector_levels},
              {"tolerance", c.tolerance},
              {"format", c.format}};
}

inline Json to_json(const Check& c) {
  return Json{{"name", c.name},          {"value", c.value},       {"expected", c.expected},
              {"formula", c.formula},    {"residual", c.residual()}, {"tolerance", c.tolerance},
              {"passed", c.passed()}};
}

inline Json to_json(const RunRecord& r, bool include_timing = true) {
  Json points = Json::array();
  for (const auto& g : r.points) {
    Json checks = Json::array();
    for (const auto& c : g.checks) checks.push_back(to_json(c));
    Json scalars = Json::object();
    for (const auto& [k, v] : g.scalars) scalars[k] = v;
    points.push_back(Json{{"p", g.p},
                          {"passed", g.passed()},
                          {"checks", std::move(checks)},
                          {"scalars", std::move(scalars)},
                          {"details", g.details},
                          {"states", g.states}});
  }
  Json out{{"library", "fermient"},
           {"version", std::string(kVersion)},
           {"config", to_json(r.config)},
           {"passed", r.passed()},
           {"points", std::move(points)},
           {"states", r.state_store}};
  if (include_timing) out["timing"] = Json{{"elapsed_ms", r.elapsed_ms}};
  return out;
}

/// One row per grid point: p, every reported scalar, then value/expected/residual per check.
/// Columns are the union over points in order of first appearance; missing cells stay empty.
inline std::string to_csv(const RunRecord& r) {
  std::vector<std::string> scalar_cols, check_cols;
  auto note = [](std::vector<std::string>& cols, const std::string& name) {
    if (std::find(cols.begin(), cols.end(), name) == cols.end()) cols.push_back(name);
  };
  for (const auto& g : r.points) {
    for (const auto& [k, v] : g.scalars) note(scalar_cols, k);
    for (const auto& c : g.checks) note(check_cols, c.name);
  }
  std::ostringstream os;
  os << std::setprecision(17) << "p";
  for (const auto& k : scalar_cols) os << ',' << k;
  for (const auto& k : check_cols) os << ',' << k << ',' << k << "_expected," << k << "_residual";
  os << ",passed\n";
  for (const auto& g : r.points) {
    os << g.p;
    for (const auto& k : scalar_cols) {
      os << ',';
      for (const auto& [name, v] : g.scalars)
        if (name == k) os << v;
    }
    for (const auto& k : check_cols) {
      auto it = std::find_if(g.checks.begin(), g.checks.end(), [&](const Check& c) { return c.name == k; });
      if (it == g.checks.end()) os << ",,,";
      else os << ',' << it->value << ',' << it->expected << ',' << it->residual();
    }
    os << ',' << (g.passed() ? 1 : 0) << '\n';
  }
  return os.str();
}

namespace detail {

inline double as_flag(bool b) { return b ? 1.0 : 0.0; }

inline Json matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void require_unit_interval(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
}

/// All N fermions in well A on internal levels 0..N-1.
inline FockVector all_in_a(const OrbitalBasis& basis, int n) {
  std::vector<int> orbitals;
  for (int level = 0; level < n; ++level) orbitals.push_back(basis.orbital(0, level));
  return slater_state(basis, orbitals);
}

}  // namespace detail

// ============================================================================
// Two electrons: split, detect one per well, analyse
// ============================================================================

inline GridPoint scenario_two_electron(double p, double tol, RunRecord* record = nullptr) {
  detail::require_unit_interval(p);
  const OrbitalBasis basis = OrbitalBasis::two_mode(2);
  GridPoint g;
  g.p = p;

  const FockVector init = detail::all_in_a(basis, 2);
  const FockVector final_state = lift_unitary(make_split(basis, p), init);
  const Projection proj = project_mode_count(final_state, "A", 1);

  g.checks.push_back({"init_is_slater", detail::as_flag(is_slater(init)), 1.0, "single Slater determinant", 0.0});
  g.checks.push_back({"final_is_slater", detail::as_flag(is_slater(final_state)), 1.0,
                      "splitting creates no fermionic entanglement", 0.0});
  g.checks.push_back({"final_norm", final_state.norm(), 1.0, "unitarity", tol});
  g.checks.push_back({"final_linear_entropy", linear_entropy_single(final_state), 0.5, "1 - 1/C(2,1)", tol});
  g.checks.push_back({"projection_probability", proj.probability, 2.0 * p * (1.0 - p), "2p(1-p)", tol});
  if (record) {
    record->keep_state(g, "init", to_json(init));
    record->keep_state(g, "final", to_json(final_state));
  }

  const bool branch_empty = proj.probability < kEqualityTolerance;
  g.scalars.emplace_back("zero_probability_branch", detail::as_flag(branch_empty));
  if (branch_empty) return g;

  const FockVector& psi = proj.state;
  const EffectiveBipartiteState eff = effective_state(psi);
  Eigen::MatrixXcd bell = Eigen::MatrixXcd::Zero(2, 2);
  bell(0, 1) = 1.0 / std::sqrt(2.0);   // |↓⟩_A|↑⟩_B
  bell(1, 0) = -1.0 / std::sqrt(2.0);  // -|↑⟩_A|↓⟩_B
  const double bell_fidelity = std::norm((bell.adjoint() * eff.c).trace());

  double spectrum_deviation = 0.0;
  const auto spectrum = schmidt_spectrum(psi, 1);
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    spectrum_deviation = std::max(spectrum_deviation, std::abs(spectrum[k] - (k < 4 ? 0.5 : 0.0)));

  const double s_single = linear_entropy_single(psi);
  const double s_fermionic = fermionic_linear_entropy(psi);
  const double s_effective = eff.linear_entropy();

  g.checks.push_back({"proj_is_slater", detail::as_flag(is_slater(psi)), 0.0, "detection creates fermionic entanglement", 0.0});
  g.checks.push_back({"proj_concurrence", concurrence_pure(psi), 1.0, "maximally entangled", tol});
  g.checks.push_back({"proj_schmidt_deviation", spectrum_deviation, 0.0, "Schmidt coefficients (1/2, 1/2, 1/2, 1/2)", tol});
  g.checks.push_back({"effective_bell_fidelity", bell_fidelity, 1.0, "(|↓↑⟩ - |↑↓⟩)/√2", tol});
  g.checks.push_back({"proj_linear_entropy", s_single, 0.75, "1 - Tr ρ₁², four eigenvalues 1/4", tol});
  g.checks.push_back({"entropy_equality_residual", s_fermionic - s_effective, 0.0,
                      "1 - 2 Tr ρ₁² = 1 - Σλ² (effective)", tol});
  g.scalars.emplace_back("fermionic_linear_entropy", s_fermionic);
  g.scalars.emplace_back("effective_linear_entropy", s_effective);
  g.details["effective_coefficients"] = detail::matrix_json(eff.c);
  if (record) record->keep_state(g, "projected", to_json(psi));
  return g;
}

// ============================================================================
// Certification by counting statistics after a second split
// ============================================================================

inline GridPoint scenario_certification(double p, double tol, RunRecord* record = nullptr) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("certify requires p in (0, 1)");
  const OrbitalBasis basis = OrbitalBasis::two_mode(2);
  GridPoint g;
  g.p = p;
  const SingleParticleUnitary split = make_split(basis, p);
  const FockVector final_state = lift_unitary(split, detail::all_in_a(basis, 2));
  const FockVector psi = project_mode_count(final_state, "A", 1).state;
  const FockVector resplit = lift_unitary(split, psi);
  const CountingDistribution fermionic = counting_statistics(resplit);
  const CountingDistribution reference = distinguishable_reference_counts(p);

  const double q = p * (1.0 - p);
  g.checks.push_back({"fermionic_P_AA", fermionic.at(2, 0), 2.0 * q, "2p(1-p)", tol});
  g.checks.push_back({"fermionic_P_BB", fermionic.at(0, 2), 2.0 * q, "2p(1-p)", tol});
  g.checks.push_back({"fermionic_P_AB", fermionic.at(1, 1), 1.0 - 4.0 * q, "1-4p(1-p)", tol});
  g.checks.push_back({"reference_P_AA", reference.at(2, 0), q, "p(1-p)", tol});
  g.checks.push_back({"reference_P_BB", reference.at(0, 2), q, "p(1-p)", tol});
  g.checks.push_back({"reference_P_AB", reference.at(1, 1), 1.0 - 2.0 * q, "1-2p(1-p)", tol});
  if (record) {
    record->keep_state(g, "projected", to_json(psi));
    record->keep_state(g, "resplit", to_json(resplit));
  }
  return g;
}

// ============================================================================
// N fermions: split, project M into A, compare with the closed forms
// ============================================================================

inline GridPoint scenario_n_fermion(int n, int m, int internal_dim, double p, double tol, RunRecord* record = nullptr) {
  if (m < 1 || m > n - m) throw ConfigError("n-fermion requires 1 <= M <= N - M");
  if (internal_dim < n) throw ConfigError("n-fermion requires internal_dim >= N");
  if (2 * internal_dim > OrbitalBasis::kMaxOrbitals) throw ConfigError("n-fermion: more than 64 orbitals");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("n-fermion requires p in (0, 1)");
  const OrbitalBasis basis = OrbitalBasis::two_mode(internal_dim);
  GridPoint g;
  g.p = p;

  const FockVector init = detail::all_in_a(basis, n);
  const FockVector final_state = lift_unitary(make_split(basis, p), init);
  const Projection proj = project_mode_count(final_state, "A", m);
  const FockVector& psi = proj.state;

  const auto spectrum = schmidt_spectrum(psi, m);
  const int rank = numerical_rank(spectrum);
  const double measured_purity = purity(m_particle_rdm(psi, m));
  const auto predicted_rank_value = static_cast<double>(predicted_rank(n, m));
  const double predicted_purity_value = predicted_purity(n, m).convert_to<double>();
  const double binom = binomial_double(n, m);

  const auto predicted = predicted_schmidt_coefficients(n, m);
  double multiset_deviation = 0.0;
  for (std::size_t k = 0; k < std::max(predicted.size(), spectrum.size()); ++k) {
    const double a = k < spectrum.size() ? spectrum[k] : 0.0;
    const double b = k < predicted.size() ? predicted[k] : 0.0;
    multiset_deviation = std::max(multiset_deviation, std::abs(a - b));
  }

  const EffectiveSplitState eff = effective_state_general(psi, m);

  g.checks.push_back({"final_is_slater", detail::as_flag(is_slater(final_state, m)), 1.0,
                      "splitting creates no fermionic entanglement", 0.0});
  g.checks.push_back({"projection_probability", proj.probability,
                      binom * std::pow(1.0 - p, m) * std::pow(p, n - m), "C(N,M)(1-p)^M p^(N-M)", tol});
  g.checks.push_back({"proj_is_slater", detail::as_flag(is_slater(psi, m)), 0.0, "Schmidt rank exceeds C(N,M)", 0.0});
  g.checks.push_back({"schmidt_rank", static_cast<double>(rank), predicted_rank_value,
                      "Σ_n N!/(n!(M-n)!(N-M)!) = 2^M C(N,M)", 0.0});
  g.checks.push_back({"purity", measured_purity, predicted_purity_value,
                      "Σ_n N!/(n!(M-n)!(N-M)!) C(N-M,M-n)² C(N,M)^-4", tol});
  g.checks.push_back({"schmidt_multiset_deviation", multiset_deviation, 0.0,
                      "λ = C(N-M,M-n)^(1/2) / C(N,M) with multiplicity N!/(n!(M-n)!(N-M)!)", tol});
  g.checks.push_back({"alice_purity", eff.alice_purity(), 1.0 / binom, "C(N,M)^-1", tol});

  if (n <= FirstQuantizedTensor::kMaxParticles && basis.size() <= FirstQuantizedTensor::kMaxDim) {
    const auto oracle = particle_bipartition_svd(to_first_quantized(psi), m);
    double oracle_deviation = 0.0;
    for (std::size_t k = 0; k < std::max(oracle.size(), spectrum.size()); ++k) {
      const double a = k < spectrum.size() ? spectrum[k] : 0.0;
      const double b = k < oracle.size() ? oracle[k] : 0.0;
      oracle_deviation = std::max(oracle_deviation, std::abs(a - b));
    }
    g.checks.push_back({"oracle_spectrum_deviation", oracle_deviation, 0.0, "first-quantized SVD", tol});
  }

  g.scalars.emplace_back("n_particles", n);
  g.scalars.emplace_back("m", m);
  g.scalars.emplace_back("slater_rank", binom);
  g.details["schmidt_spectrum"] = std::vector<double>(spectrum.begin(), spectrum.begin() + rank);
  g.details["predicted_purity_exact"] = predicted_purity(n, m).str();
  if (record) record->keep_state(g, "projected", to_json(psi));
  return g;
}

// ============================================================================
// Detector: interaction, readout, pre-readout mixed state
// ============================================================================

inline GridPoint scenario_detector(double p, int levels, double tol, RunRecord* record = nullptr) {
  detail::require_unit_interval(p);
  if (levels < 3) throw ConfigError("detector requires at least 3 levels");
  const OrbitalBasis basis = OrbitalBasis::two_mode(2);
  GridPoint g;
  g.p = p;
  const FockVector final_state = lift_unitary(make_split(basis, p), detail::all_in_a(basis, 2));
  const DetectorCoupling coupling = build_coupling(levels, 1.0);
  const JointState joint = interact(final_state, coupling, 0);

  const double cross = std::sqrt(p * (1.0 - p));
  auto amp = [&](int i, int j, int level) { return joint.amplitude(Occupation::from_orbitals({i, j}), level); };
  g.checks.push_back({"amp_AA_level2", std::abs(amp(0, 1, 2) - (1.0 - p)), 0.0, "(1-p) on |2⟩", tol});
  g.checks.push_back({"amp_AdBu_level1", std::abs(amp(0, 3, 1) - cross), 0.0, "√(p(1-p)) on |1⟩", tol});
  g.checks.push_back({"amp_AuBd_level1", std::abs(amp(1, 2, 1) + cross), 0.0, "-√(p(1-p)) on |1⟩", tol});
  g.checks.push_back({"amp_BB_level0", std::abs(amp(2, 3, 0) - p), 0.0, "p on |0⟩", tol});
  g.checks.push_back({"joint_norm", std::sqrt(joint.norm_squared()), 1.0, "unitarity", tol});

  const double expected[3] = {p * p, 2.0 * p * (1.0 - p), (1.0 - p) * (1.0 - p)};
  const char* formulas[3] = {"p²", "2p(1-p)", "(1-p)²"};
  for (int level = 0; level < 3; ++level) {
    const Projection r = readout(joint, level);
    g.checks.push_back({"readout_probability_" + std::to_string(level), r.probability, expected[level],
                        formulas[level], tol});
  }

  const SectorDensityMatrix rho = trace_out_detector(joint);
  g.checks.push_back({"mixed_concurrence", concurrence_mixed(rho), 0.0, "C(ρ_ff) = 0", std::max(tol, 1e-9)});
  const Projection clicked = readout(joint, 1);
  if (clicked.probability > kEqualityTolerance) {
    g.checks.push_back({"readout1_concurrence", concurrence_pure(clicked.state), 1.0, "maximally entangled", tol});
    if (record) record->keep_state(g, "readout1", to_json(clicked.state));
  }
  g.details["rho_ff"] = detail::matrix_json(rho.rho);
  if (record) record->keep_state(g, "joint", to_json(joint));
  return g;
}

// ============================================================================
// Dispatch
// ============================================================================

inline RunRecord run_scenario(const ScenarioConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  RunRecord record;
  record.config = config;
  if (config.p_grid.empty()) throw ConfigError("empty p grid");
  if (!(config.tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");
  if (config.format != "json" && config.format != "csv") throw ConfigError("format must be json or csv");
  for (double p : config.p_grid) {
    if (config.scenario == "two-electron") {
      record.points.push_back(scenario_two_electron(p, config.tolerance, &record));
    } else if (config.scenario == "certify") {
      record.points.push_back(scenario_certification(p, config.tolerance, &record));
    } else if (config.scenario == "n-fermion") {
      record.points.push_back(scenario_n_fermion(config.n_particles, config.m, config.effective_internal_dim(), p,
                                                 config.tolerance, &record));
    } else if (config.scenario == "detector") {
      record.points.push_back(scenario_detector(p, config.detector_levels, config.tolerance, &record));
    } else {
      throw ConfigError("unknown scenario '" + config.scenario + "'");
    }
  }
  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return record;
}

inline std::string render(const RunRecord& record) {
  if (record.config.format == "csv") return to_csv(record);
  return to_json(record).dump(2) + "\n";
}

}  // namespace fermient

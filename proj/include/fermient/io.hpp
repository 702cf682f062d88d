// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief Canonical JSON forms of Fock vectors, joint fermion-detector states and
 * Schmidt decompositions.
 *
 * Amplitude lists are sorted by the lexicographic order of the occupied-orbital
 * lists (then detector level), so identical states always serialize to
 * identical text.
 */

#pragma once

#include "fermient/detector.hpp"
#include "fermient/entanglement.hpp"
#include "fermient/fock.hpp"

#include <json.hpp>

namespace fermient {

using Json = nlohmann::ordered_json;

inline Json to_json(const OrbitalBasis& basis) {
  return Json{{"modes", basis.modes()}, {"internal_dim", basis.internal_dim()}};
}

inline OrbitalBasis basis_from_json(const Json& j) {
  return OrbitalBasis(j.at("modes").get<std::vector<std::string>>(), j.at("internal_dim").get<int>());
}

inline Json to_json(const FockVector& v) {
  Json amps = Json::array();
  for (const auto& [occ, a] : v)  // map order is the canonical order
    amps.push_back(Json{{"occupied", occ.orbitals()}, {"re", a.real()}, {"im", a.imag()}});
  return Json{{"basis", to_json(v.basis())}, {"n_particles", v.n_particles()}, {"amplitudes", std::move(amps)}};
}

inline FockVector fock_from_json(const Json& j) {
  FockVector v(basis_from_json(j.at("basis")), j.at("n_particles").get<int>());
  for (const auto& e : j.at("amplitudes")) {
    const auto orbs = e.at("occupied").get<std::vector<int>>();
    for (int o : orbs) v.basis().check(o);
    v.add(Occupation::from_orbitals(orbs), Complex(e.at("re").get<double>(), e.at("im").get<double>()));
  }
  return v;
}

inline Json to_json(const JointState& state) {
  Json amps = Json::array();
  for (const auto& [key, a] : state)
    amps.push_back(Json{{"occupied", key.first.orbitals()}, {"detector", key.second}, {"re", a.real()}, {"im", a.imag()}});
  return Json{{"basis", to_json(state.basis())},
              {"n_particles", state.n_particles()},
              {"detector_levels", state.levels()},
              {"amplitudes", std::move(amps)}};
}

inline Json to_json(const SchmidtResult& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json entry{{"n", e.n_left_in_a}, {"lambda", e.lambda}};
    entry["left_label"] = e.left_label ? Json(e.left_label->orbitals()) : Json(nullptr);
    entry["left"] = to_json(e.left);
    entry["right"] = to_json(e.right);
    entries.push_back(std::move(entry));
  }
  return Json{{"n_particles", r.n_particles}, {"m", r.m}, {"entries", std::move(entries)}};
}

}  // namespace fermient

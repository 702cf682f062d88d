// Copyright 2026 The fermient Authors
// SPDX-License-Identifier: Apache-2.0

// Two electrons start in well A, tunnel with probability p, and one is found in
// each well. Prints the state after each step and its entanglement measures.

#include "fermient/fermient.hpp"

#include <iostream>

using namespace fermient;

namespace {

void show(const char* label, const FockVector& v) {
  std::cout << label << '\n';
  for (const auto& [occ, a] : v) {
    std::cout << "  {";
    for (int o : occ.orbitals()) std::cout << ' ' << o;
    std::cout << " }  " << a << '\n';
  }
}

}  // namespace

int main() {
  const double p = 0.3;
  const OrbitalBasis basis = OrbitalBasis::two_mode(2);  // 0 = A↓, 1 = A↑, 2 = B↓, 3 = B↑

  const FockVector init = slater_state(basis, {0, 1});
  const FockVector split = lift_unitary(make_split(basis, p), init);
  const Projection found = project_mode_count(split, "A", 1);

  show("initial", init);
  show("after splitting", split);
  show("one fermion found in A", found.state);

  std::cout << "P(one in each well) = " << found.probability << '\n'
            << "concurrence before / after detection = " << concurrence_pure(split) << " / "
            << concurrence_pure(found.state) << '\n'
            << "Slater before / after = " << is_slater(split) << " / " << is_slater(found.state) << '\n';

  const JointState joint = interact(split, build_coupling(3, 1.0));
  std::cout << "concurrence of the state seen before reading the counter = "
            << concurrence_mixed(trace_out_detector(joint)) << '\n';
}

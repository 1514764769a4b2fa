// Copyright 2026 The qndm-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNDM_MEASUREMENT_HPP
#define QNDM_MEASUREMENT_HPP

#include "qndm/circuit.hpp"
#include "qndm/pauli.hpp"
#include "qndm/statevector.hpp"

namespace qndm {

/// <psi|P|psi>, exact. The state must have exactly p.size() qubits.
double expectation(const StateVector &state, const PauliString &p);

/// Sum_i h_i <psi|P_i|psi>.
double expectation(const StateVector &state, const Observable &m);

/// Rotates each non-identity site of `p` into the computational basis:
/// X -> [H], Y -> [S-dagger, H], Z and I -> [].
Circuit basis_change_circuit(const PauliString &p);

/// Probability that a computational-basis readout after
/// basis_change_circuit(p) yields eigenvalue +1. `rotated` is the state
/// with the basis change already applied.
double plus_one_probability(const StateVector &rotated, const PauliString &p);

}  // namespace qndm

#endif

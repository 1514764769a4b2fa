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

#ifndef QNDM_ACCOUNTING_HPP
#define QNDM_ACCOUNTING_HPP

#include <cstddef>
#include <cstdint>

#include "qndm/circuit.hpp"

namespace qndm {

// Gate-cost accounting units shared by the estimators (measured cost) and the
// closed-form cost model.
//
// * every rotation and CNOT of U(theta) or U^dagger(theta): 1 unit
// * one detector coupling exp(i a Z_d (x) P) on n system qubits: 4n units
//   (two basis-change layers, a CNOT ladder, one Z rotation)
// * a direct-measurement readout (basis change plus measurement of the n
//   system qubits): n units per execution
// * detector preparation and S-dagger/H readout: 0 units
inline constexpr std::uint64_t kCouplingUnitsPerQubit = 4;
inline constexpr std::uint64_t kReadoutUnitsPerQubit = 1;

/// Accounting units of one QNDM execution recorded in `tally`.
inline std::uint64_t qndm_execution_units(const GateTally &tally, std::size_t n) {
    return tally.ansatz_gates() + kCouplingUnitsPerQubit * n * tally.couplings;
}

/// Accounting units of one DM execution: U(theta) gates plus the readout.
inline std::uint64_t dm_execution_units(const GateTally &ansatz_tally, std::size_t n) {
    return ansatz_tally.ansatz_gates() + kReadoutUnitsPerQubit * n;
}

}  // namespace qndm

#endif

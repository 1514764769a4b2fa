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

#ifndef QNDM_CIRCUIT_HPP
#define QNDM_CIRCUIT_HPP

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "qndm/pauli.hpp"

namespace qndm {

/// exp(-i * angle * sigma_axis / 2) on one qubit. Axis is X, Y or Z.
struct Rotation {
    Pauli axis;
    double angle;
    std::size_t qubit;
};

struct Hadamard {
    std::size_t qubit;
};

/// diag(1, i)
struct PhaseS {
    std::size_t qubit;
};

/// diag(1, -i)
struct PhaseSdg {
    std::size_t qubit;
};

struct Cnot {
    std::size_t control;
    std::size_t target;
};

/// exp(i * angle * Z_detector (x) P) where P acts on the system qubits. The
/// angle already carries lambda, the term coefficient and the sign.
struct DetectorCoupling {
    double angle;
    PauliString string;
};

using Gate = std::variant<Rotation, Hadamard, PhaseS, PhaseSdg, Cnot, DetectorCoupling>;
using Circuit = std::vector<Gate>;

inline Gate rx(double angle, std::size_t q) { return Rotation{Pauli::X, angle, q}; }
inline Gate ry(double angle, std::size_t q) { return Rotation{Pauli::Y, angle, q}; }
inline Gate rz(double angle, std::size_t q) { return Rotation{Pauli::Z, angle, q}; }
inline Gate hadamard(std::size_t q) { return Hadamard{q}; }
inline Gate phase_s(std::size_t q) { return PhaseS{q}; }
inline Gate phase_sdg(std::size_t q) { return PhaseSdg{q}; }
inline Gate cnot(std::size_t control, std::size_t target) { return Cnot{control, target}; }
inline Gate coupling(double angle, PauliString p) { return DetectorCoupling{angle, std::move(p)}; }

/// Applied-gate counts by kind, accumulated by the engine.
struct GateTally {
    std::uint64_t rotations = 0;
    std::uint64_t cnots = 0;
    std::uint64_t cliffords = 0;  // H, S, S-dagger
    std::uint64_t couplings = 0;

    std::uint64_t total() const { return rotations + cnots + cliffords + couplings; }
    /// Gates of the parameterized circuit U(theta): rotations and CNOTs.
    std::uint64_t ansatz_gates() const { return rotations + cnots; }

    GateTally &operator+=(const GateTally &o) {
        rotations += o.rotations;
        cnots += o.cnots;
        cliffords += o.cliffords;
        couplings += o.couplings;
        return *this;
    }
    friend bool operator==(const GateTally &, const GateTally &) = default;
};

}  // namespace qndm

#endif

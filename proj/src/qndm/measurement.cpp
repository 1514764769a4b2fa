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

#include "qndm/measurement.hpp"

#include <algorithm>
#include <bit>

#include "qndm/error.hpp"

namespace qndm {

double expectation(const StateVector &state, const PauliString &p) {
    require(state.num_qubits() == p.size(), "state qubit count does not match Pauli string length");
    static constexpr Amplitude kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Amplitude ypow = kIPow[p.y_count() % 4];
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t sign = p.sign_mask();
    const auto amps = state.amplitudes();
    Amplitude acc = 0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        const Amplitude c = (std::popcount(x & sign) & 1) ? -ypow : ypow;
        acc += std::conj(amps[x ^ flip]) * c * amps[x];
    }
    return std::clamp(acc.real(), -1.0, 1.0);
}

double expectation(const StateVector &state, const Observable &m) {
    double f = 0;
    for (const auto &t : m.terms()) {
        f += t.coeff * expectation(state, t.string);
    }
    return f;
}

Circuit basis_change_circuit(const PauliString &p) {
    Circuit out;
    for (std::size_t j = 0; j < p.size(); ++j) {
        switch (p[j]) {
            case Pauli::X:
                out.push_back(hadamard(j));
                break;
            case Pauli::Y:
                out.push_back(phase_sdg(j));
                out.push_back(hadamard(j));
                break;
            case Pauli::Z:
            case Pauli::I:
                break;
        }
    }
    return out;
}

double plus_one_probability(const StateVector &rotated, const PauliString &p) {
    require(rotated.num_qubits() == p.size(), "state qubit count does not match Pauli string length");
    const std::uint64_t support = p.support_mask();
    const auto amps = rotated.amplitudes();
    double plus = 0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        if ((std::popcount(x & support) & 1) == 0) {
            plus += std::norm(amps[x]);
        }
    }
    return std::clamp(plus, 0.0, 1.0);
}

}  // namespace qndm

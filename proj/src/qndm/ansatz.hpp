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

#ifndef QNDM_ANSATZ_HPP
#define QNDM_ANSATZ_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qndm/circuit.hpp"
#include "qndm/random.hpp"

namespace qndm {

using ParamVector = std::vector<double>;

/// m layers, each n single-qubit rotations followed by the CNOT chain
/// C_0NOT_1 ... C_{n-2}NOT_{n-1}. Parameter (layer j, qubit i) lives at flat
/// index j * n + i.
class LayeredAnsatz {
   public:
    /// `axes` is layer-major, length m * n, each X, Y or Z.
    LayeredAnsatz(std::size_t n, std::size_t m, std::vector<Pauli> axes);

    /// All rotations about the same axis.
    static LayeredAnsatz uniform(std::size_t n, std::size_t m, Pauli axis);

    std::size_t num_qubits() const { return n_; }
    std::size_t num_layers() const { return m_; }
    std::size_t num_params() const { return axes_.size(); }
    Pauli axis(std::size_t layer, std::size_t qubit) const { return axes_[param_index(layer, qubit)]; }
    const std::vector<Pauli> &axes() const { return axes_; }
    std::size_t param_index(std::size_t layer, std::size_t qubit) const { return layer * n_ + qubit; }

    /// Text form: header `n m seed`, then m lines of n axis letters.
    std::string to_text(std::uint64_t seed) const;
    static LayeredAnsatz parse(std::string_view text, std::uint64_t *seed_out = nullptr);

    friend bool operator==(const LayeredAnsatz &, const LayeredAnsatz &) = default;

   private:
    std::size_t n_;
    std::size_t m_;
    std::vector<Pauli> axes_;
};

/// U(theta) as a gate list, or its exact inverse when `dagger` is set
/// (reversed order, negated angles).
Circuit build_circuit(const LayeredAnsatz &ansatz, std::span<const double> theta, bool dagger = false);

/// k = m (2n - 1): every rotation plus every CNOT of U(theta).
std::size_t gate_count(const LayeredAnsatz &ansatz);
std::size_t gate_count(std::size_t n, std::size_t m);

/// Smallest layer count whose gate count reaches `k_target`.
std::size_t layers_for_gate_target(std::size_t n, std::size_t k_target);

/// theta + amount * e_l.
ParamVector shift(std::span<const double> theta, std::size_t l, double amount);

struct AnsatzInstance {
    LayeredAnsatz ansatz;
    ParamVector theta;
};

/// Axes uniform over {X, Y, Z}, angles uniform over [0, 2 pi).
AnsatzInstance random_ansatz(std::size_t n, std::size_t m, Rng &rng);

}  // namespace qndm

#endif

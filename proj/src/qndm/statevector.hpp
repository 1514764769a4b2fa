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

#ifndef QNDM_STATEVECTOR_HPP
#define QNDM_STATEVECTOR_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qndm/circuit.hpp"
#include "qndm/random.hpp"

namespace qndm {

using Amplitude = std::complex<double>;

/// Dense statevector over n system qubits plus an optional detector, which is
/// always the highest-index qubit.
class StateVector {
   public:
    static constexpr std::size_t kMaxQubits = 30;

    /// Takes ownership of `amplitudes` (length 2^(n + detector)). Throws if the
    /// vector is not normalized to 1e-10.
    StateVector(std::vector<Amplitude> amplitudes, std::size_t system_qubits, bool with_detector);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t num_system_qubits() const { return system_qubits_; }
    bool has_detector() const { return num_qubits_ > system_qubits_; }
    std::optional<std::size_t> detector_index() const {
        return has_detector() ? std::optional<std::size_t>(system_qubits_) : std::nullopt;
    }
    std::size_t dimension() const { return amps_.size(); }

    std::span<const Amplitude> amplitudes() const { return amps_; }
    Amplitude operator[](std::size_t i) const { return amps_[i]; }
    double norm_squared() const;

    const GateTally &tally() const { return tally_; }
    void reset_tally() { tally_ = {}; }

    void apply(const Gate &gate);

   private:
    void apply_1q(std::size_t q, Amplitude u00, Amplitude u01, Amplitude u10, Amplitude u11);
    void apply_diag(std::size_t q, Amplitude d0, Amplitude d1);
    void apply_cnot(std::size_t control, std::size_t target);
    void apply_coupling(double angle, const PauliString &p);
    void check_qubit(std::size_t q) const;

    std::vector<Amplitude> amps_;
    std::size_t system_qubits_;
    std::size_t num_qubits_;
    GateTally tally_;
};

/// |0...0> on n qubits; with a detector, the extra qubit is put in
/// (|0> + |1>)/sqrt(2). The preparation Hadamard is not tallied.
StateVector init_state(std::size_t n, bool with_detector);

/// Applies gates in order, tallying each one.
void apply_circuit(StateVector &state, std::span<const Gate> gates);

/// exp(i * angle * Z_detector (x) P). Throws ContractError without a detector.
void apply_detector_coupling(StateVector &state, double angle, const PauliString &p);

/// Marginal probability that `qubit` reads `outcome`.
double exact_probability(const StateVector &state, std::size_t qubit, int outcome);

/// Joint distribution of the listed qubits; outcome index bit j is qubits[j].
std::vector<double> marginal_distribution(const StateVector &state, std::span<const std::size_t> qubits);

/// N i.i.d. shots from the exact joint distribution of `qubits`. The state is
/// left untouched. Bit j of each result is qubits[j].
std::vector<Bitstring> sample_bits(const StateVector &state, std::span<const std::size_t> qubits, std::size_t shots,
                                   Rng &rng);

/// Multinomial outcome counts for N shots from `probs` (conditional binomial
/// decomposition). Sum of the result is exactly N.
std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t shots, Rng &rng);

}  // namespace qndm

#endif

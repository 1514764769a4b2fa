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

#include "qndm/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qndm/error.hpp"

namespace qndm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr Amplitude kI{0.0, 1.0};

}  // namespace

StateVector::StateVector(std::vector<Amplitude> amplitudes, std::size_t system_qubits, bool with_detector)
    : amps_(std::move(amplitudes)), system_qubits_(system_qubits), num_qubits_(system_qubits + (with_detector ? 1 : 0)) {
    require_config(system_qubits >= 1, "state needs at least one system qubit");
    require_config(num_qubits_ <= kMaxQubits, "too many qubits for a dense statevector");
    require(amps_.size() == (std::size_t{1} << num_qubits_), "amplitude count must be 2^q");
    require(std::abs(norm_squared() - 1.0) < 1e-10, "state is not normalized");
}

double StateVector::norm_squared() const {
    double s = 0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void StateVector::check_qubit(std::size_t q) const {
    if (q >= num_qubits_) {
        throw ContractError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) +
                            " qubits");
    }
}

void StateVector::apply_1q(std::size_t q, Amplitude u00, Amplitude u01, Amplitude u10, Amplitude u11) {
    const std::size_t m = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t hi = 0; hi < dim; hi += 2 * m) {
        for (std::size_t i = hi; i < hi + m; ++i) {
            const Amplitude a = amps_[i];
            const Amplitude b = amps_[i | m];
            amps_[i] = u00 * a + u01 * b;
            amps_[i | m] = u10 * a + u11 * b;
        }
    }
}

void StateVector::apply_diag(std::size_t q, Amplitude d0, Amplitude d1) {
    const std::size_t m = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] *= (i & m) ? d1 : d0;
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    const std::size_t c = std::size_t{1} << control;
    const std::size_t t = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & c) && !(i & t)) {
            std::swap(amps_[i], amps_[i | t]);
        }
    }
}

// (Z_d (x) P)|x> = i^{#Y} (-1)^{x_d + |x & sign_mask|} |x ^ flip_mask>, so the
// exponential mixes each amplitude with exactly one partner.
void StateVector::apply_coupling(double angle, const PauliString &p) {
    const std::size_t d = std::size_t{1} << system_qubits_;
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t sign = p.sign_mask() | d;
    static constexpr Amplitude kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Amplitude ypow = kIPow[p.y_count() % 4];
    const double c = std::cos(angle);
    const Amplitude is = kI * std::sin(angle);
    auto coeff = [&](std::size_t x) { return (std::popcount(x & sign) & 1) ? -ypow : ypow; };

    if (flip == 0) {
        for (std::size_t x = 0; x < amps_.size(); ++x) {
            amps_[x] *= c + is * coeff(x);
        }
        return;
    }
    const std::uint64_t pivot = flip & (~flip + 1);
    for (std::size_t x = 0; x < amps_.size(); ++x) {
        if (x & pivot) {
            continue;
        }
        const std::size_t y = x ^ flip;
        const Amplitude ax = amps_[x];
        const Amplitude ay = amps_[y];
        amps_[x] = c * ax + is * coeff(y) * ay;
        amps_[y] = c * ay + is * coeff(x) * ax;
    }
}

void StateVector::apply(const Gate &gate) {
    static const double r = 1.0 / std::sqrt(2.0);
    std::visit(overloaded{
                   [&](const Rotation &g) {
                       check_qubit(g.qubit);
                       require(std::isfinite(g.angle), "rotation angle must be finite");
                       const double c = std::cos(g.angle / 2);
                       const double s = std::sin(g.angle / 2);
                       switch (g.axis) {
                           case Pauli::X:
                               apply_1q(g.qubit, c, -kI * s, -kI * s, c);
                               break;
                           case Pauli::Y:
                               apply_1q(g.qubit, c, -s, s, c);
                               break;
                           case Pauli::Z:
                               apply_diag(g.qubit, std::polar(1.0, -g.angle / 2), std::polar(1.0, g.angle / 2));
                               break;
                           case Pauli::I:
                               throw ContractError("rotation axis must be X, Y or Z");
                       }
                       ++tally_.rotations;
                   },
                   [&](const Hadamard &g) {
                       check_qubit(g.qubit);
                       apply_1q(g.qubit, r, r, r, -r);
                       ++tally_.cliffords;
                   },
                   [&](const PhaseS &g) {
                       check_qubit(g.qubit);
                       apply_diag(g.qubit, 1.0, kI);
                       ++tally_.cliffords;
                   },
                   [&](const PhaseSdg &g) {
                       check_qubit(g.qubit);
                       apply_diag(g.qubit, 1.0, -kI);
                       ++tally_.cliffords;
                   },
                   [&](const Cnot &g) {
                       check_qubit(g.control);
                       check_qubit(g.target);
                       require(g.control != g.target, "CNOT control and target must differ");
                       apply_cnot(g.control, g.target);
                       ++tally_.cnots;
                   },
                   [&](const DetectorCoupling &g) {
                       require(has_detector(), "detector coupling needs a state with a detector qubit");
                       require(g.string.size() == system_qubits_, "coupling string length must equal system size");
                       require(std::isfinite(g.angle), "coupling angle must be finite");
                       apply_coupling(g.angle, g.string);
                       ++tally_.couplings;
                   },
               },
               gate);
}

StateVector init_state(std::size_t n, bool with_detector) {
    require_config(n >= 1, "system needs at least one qubit");
    require_config(n + (with_detector ? 1 : 0) <= StateVector::kMaxQubits, "too many qubits for a dense statevector");
    std::vector<Amplitude> amps(std::size_t{1} << (n + (with_detector ? 1 : 0)));
    if (with_detector) {
        const double r = 1.0 / std::sqrt(2.0);
        amps[0] = r;
        amps[std::size_t{1} << n] = r;
    } else {
        amps[0] = 1.0;
    }
    return StateVector(std::move(amps), n, with_detector);
}

void apply_circuit(StateVector &state, std::span<const Gate> gates) {
    for (const auto &g : gates) {
        state.apply(g);
    }
}

void apply_detector_coupling(StateVector &state, double angle, const PauliString &p) {
    state.apply(DetectorCoupling{angle, p});
}

double exact_probability(const StateVector &state, std::size_t qubit, int outcome) {
    require(qubit < state.num_qubits(), "qubit index out of range");
    require(outcome == 0 || outcome == 1, "outcome must be 0 or 1");
    const std::size_t m = std::size_t{1} << qubit;
    double p = 0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (((i & m) != 0) == (outcome == 1)) {
            p += std::norm(amps[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> marginal_distribution(const StateVector &state, std::span<const std::size_t> qubits) {
    require(qubits.size() <= 24, "too many qubits in a marginal");
    for (auto q : qubits) {
        require(q < state.num_qubits(), "qubit index out of range");
    }
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            k |= ((i >> qubits[j]) & 1U) << j;
        }
        probs[k] += std::norm(amps[i]);
    }
    return probs;
}

std::vector<Bitstring> sample_bits(const StateVector &state, std::span<const std::size_t> qubits, std::size_t shots,
                                   Rng &rng) {
    require(shots >= 1, "need at least one shot");
    const auto probs = marginal_distribution(state, qubits);
    std::vector<double> cdf(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    std::uniform_real_distribution<double> u(0.0, cdf.back());
    std::vector<Bitstring> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        const double x = u(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        if (it == cdf.end()) {
            --it;
        }
        out.push_back(Bitstring{static_cast<std::uint64_t>(it - cdf.begin()), qubits.size()});
    }
    return out;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t shots, Rng &rng) {
    require(!probs.empty(), "empty distribution");
    std::vector<std::uint64_t> counts(probs.size(), 0);
    double mass = 0;
    for (double p : probs) {
        require(p >= 0, "negative probability");
        mass += p;
    }
    std::size_t last = probs.size() - 1;
    while (last > 0 && probs[last] <= 0) {
        --last;
    }
    std::uint64_t remaining = shots;
    for (std::size_t i = 0; i < last && remaining > 0; ++i) {
        if (probs[i] <= 0) {
            continue;
        }
        const double p = mass > 0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 1.0;
        std::binomial_distribution<std::uint64_t> draw(remaining, p);
        const std::uint64_t c = draw(rng);
        counts[i] = c;
        remaining -= c;
        mass -= probs[i];
    }
    counts[last] += remaining;
    return counts;
}

}  // namespace qndm

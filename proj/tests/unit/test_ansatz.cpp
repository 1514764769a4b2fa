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


#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "dense_oracle.hpp"
#include "qndm/ansatz.hpp"
#include "qndm/error.hpp"
#include "qndm/statevector.hpp"

namespace qndm {
namespace {

TEST(Ansatz, ZeroAnglesLeaveOnlyTheCnot) {
    const auto a = LayeredAnsatz::uniform(2, 1, Pauli::X);
    const oracle::Mat u = oracle::circuit_matrix(build_circuit(a, ParamVector{0, 0}), 2);
    const oracle::Mat c = oracle::gate_matrix(cnot(0, 1), 2);
    EXPECT_NEAR((u - c).norm(), 0.0, 1e-14);
}

TEST(Ansatz, DaggerUndoesCircuit) {
    Rng rng(12);
    const auto inst = random_ansatz(4, 3, rng);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Amplitude> amps(16);
        double norm = 0;
        for (auto &x : amps) {
            x = {g(rng), g(rng)};
            norm += std::norm(x);
        }
        for (auto &x : amps) {
            x /= std::sqrt(norm);
        }
        StateVector s(amps, 4, false);
        apply_circuit(s, build_circuit(inst.ansatz, inst.theta));
        apply_circuit(s, build_circuit(inst.ansatz, inst.theta, true));
        for (std::size_t i = 0; i < amps.size(); ++i) {
            EXPECT_NEAR(std::abs(s[i] - amps[i]), 0.0, 1e-10);
        }
    }
}

TEST(Ansatz, GateCounts) {
    EXPECT_EQ(gate_count(1, 1), 1u);
    EXPECT_EQ(gate_count(10, 2), 38u);
    EXPECT_EQ(layers_for_gate_target(10, 500), 27u);
    EXPECT_EQ(gate_count(10, 27), 513u);
    Rng rng(3);
    const auto inst = random_ansatz(10, 5, rng);
    EXPECT_EQ(inst.theta.size(), 50u);
    EXPECT_EQ(gate_count(inst.ansatz), 95u);
    EXPECT_EQ(build_circuit(inst.ansatz, inst.theta).size(), 95u);
}

TEST(Ansatz, CircuitLayout) {
    const auto a = LayeredAnsatz(3, 2, {Pauli::X, Pauli::Y, Pauli::Z, Pauli::Z, Pauli::Y, Pauli::X});
    const ParamVector theta{1, 2, 3, 4, 5, 6};
    const auto c = build_circuit(a, theta);
    ASSERT_EQ(c.size(), 10u);
    const auto &r = std::get<Rotation>(c[6]);
    EXPECT_EQ(r.axis, Pauli::Y);
    EXPECT_EQ(r.qubit, 1u);
    EXPECT_DOUBLE_EQ(r.angle, 5.0);
    const auto &cn = std::get<Cnot>(c[3]);
    EXPECT_EQ(cn.control, 0u);
    EXPECT_EQ(cn.target, 1u);
    EXPECT_EQ(a.param_index(1, 2), 5u);
    EXPECT_THROW(build_circuit(a, ParamVector{1, 2}), ContractError);
}

TEST(Ansatz, Shift) {
    const ParamVector theta{0, 0};
    EXPECT_EQ(shift(theta, 1, std::numbers::pi / 2), (ParamVector{0, std::numbers::pi / 2}));
    EXPECT_EQ(shift(shift(theta, 0, 0.7), 0, -0.7), theta);
    EXPECT_THROW(shift(theta, 2, 1.0), ContractError);
}

TEST(Ansatz, RandomIsDeterministicAndCoversAxes) {
    Rng a(5);
    Rng b(5);
    const auto x = random_ansatz(6, 50, a);
    const auto y = random_ansatz(6, 50, b);
    EXPECT_EQ(x.ansatz, y.ansatz);
    EXPECT_EQ(x.theta, y.theta);
    std::array<int, 4> counts{};
    for (auto p : x.ansatz.axes()) {
        ++counts[static_cast<int>(p)];
    }
    EXPECT_EQ(counts[0], 0);
    for (int i = 1; i < 4; ++i) {
        EXPECT_NEAR(counts[i] / 300.0, 1.0 / 3.0, 0.1);
    }
    for (double t : x.theta) {
        EXPECT_GE(t, 0.0);
        EXPECT_LT(t, 2 * std::numbers::pi);
    }
}

TEST(Ansatz, TextRoundTrip) {
    Rng rng(8);
    const auto inst = random_ansatz(3, 4, rng);
    std::uint64_t seed = 0;
    EXPECT_EQ(LayeredAnsatz::parse(inst.ansatz.to_text(77), &seed), inst.ansatz);
    EXPECT_EQ(seed, 77u);
    EXPECT_THROW(LayeredAnsatz::parse("2 1 0\nXYZ\n"), ConfigError);
    EXPECT_THROW(LayeredAnsatz(2, 1, {Pauli::X, Pauli::I}), ConfigError);
}

TEST(Ansatz, MatchesDenseProduct) {
    Rng rng(21);
    for (int rep = 0; rep < 5; ++rep) {
        const auto inst = random_ansatz(3, 2, rng);
        StateVector s = init_state(3, false);
        apply_circuit(s, build_circuit(inst.ansatz, inst.theta));
        const oracle::Vec v = oracle::circuit_matrix(build_circuit(inst.ansatz, inst.theta), 3) * oracle::basis(3);
        for (std::size_t i = 0; i < 8; ++i) {
            EXPECT_NEAR(std::abs(s[i] - v(i)), 0.0, 1e-12);
        }
    }
}

}  // namespace
}  // namespace qndm

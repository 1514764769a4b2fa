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

#include "qndm/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qndm/error.hpp"

namespace qndm {

LayeredAnsatz::LayeredAnsatz(std::size_t n, std::size_t m, std::vector<Pauli> axes) : n_(n), m_(m), axes_(std::move(axes)) {
    require_config(n >= 1, "ansatz needs n >= 1");
    require_config(m >= 1, "ansatz needs at least one layer");
    require_config(axes_.size() == n * m, "ansatz needs exactly m * n rotation axes");
    for (auto a : axes_) {
        require_config(a != Pauli::I, "rotation axes must be X, Y or Z");
    }
}

LayeredAnsatz LayeredAnsatz::uniform(std::size_t n, std::size_t m, Pauli axis) {
    return LayeredAnsatz(n, m, std::vector<Pauli>(n * m, axis));
}

std::string LayeredAnsatz::to_text(std::uint64_t seed) const {
    std::ostringstream out;
    out << n_ << ' ' << m_ << ' ' << seed << '\n';
    for (std::size_t j = 0; j < m_; ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            out << to_char(axis(j, i));
        }
        out << '\n';
    }
    return out.str();
}

LayeredAnsatz LayeredAnsatz::parse(std::string_view text, std::uint64_t *seed_out) {
    std::istringstream in{std::string(text)};
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    if (!(in >> n >> m >> seed)) {
        throw ConfigError("ansatz text must start with 'n m seed'");
    }
    std::vector<Pauli> axes;
    std::string row;
    for (std::size_t j = 0; j < m; ++j) {
        if (!(in >> row) || row.size() != n) {
            throw ConfigError("ansatz layer " + std::to_string(j) + " must have " + std::to_string(n) + " axis letters");
        }
        for (char c : row) {
            axes.push_back(pauli_from_char(c));
        }
    }
    if (seed_out) {
        *seed_out = seed;
    }
    return LayeredAnsatz(n, m, std::move(axes));
}

Circuit build_circuit(const LayeredAnsatz &ansatz, std::span<const double> theta, bool dagger) {
    require(theta.size() == ansatz.num_params(), "parameter vector length does not match ansatz");
    const std::size_t n = ansatz.num_qubits();
    Circuit out;
    out.reserve(gate_count(ansatz));
    for (std::size_t j = 0; j < ansatz.num_layers(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = theta[ansatz.param_index(j, i)];
            require(std::isfinite(angle), "parameters must be finite");
            out.push_back(Rotation{ansatz.axis(j, i), angle, i});
        }
        for (std::size_t i = 1; i < n; ++i) {
            out.push_back(cnot(i - 1, i));
        }
    }
    if (dagger) {
        std::reverse(out.begin(), out.end());
        for (auto &g : out) {
            if (auto *r = std::get_if<Rotation>(&g)) {
                r->angle = -r->angle;
            }
        }
    }
    return out;
}

std::size_t gate_count(std::size_t n, std::size_t m) { return m * (2 * n - 1); }

std::size_t gate_count(const LayeredAnsatz &ansatz) { return gate_count(ansatz.num_qubits(), ansatz.num_layers()); }

std::size_t layers_for_gate_target(std::size_t n, std::size_t k_target) {
    require_config(n >= 1, "n must be positive");
    const std::size_t per_layer = 2 * n - 1;
    return std::max<std::size_t>(1, (k_target + per_layer - 1) / per_layer);
}

ParamVector shift(std::span<const double> theta, std::size_t l, double amount) {
    require(l < theta.size(), "shift direction " + std::to_string(l) + " out of range for " +
                                  std::to_string(theta.size()) + " parameters");
    ParamVector out(theta.begin(), theta.end());
    out[l] += amount;
    return out;
}

AnsatzInstance random_ansatz(std::size_t n, std::size_t m, Rng &rng) {
    require_config(n >= 1 && m >= 1, "random ansatz needs n, m >= 1");
    std::uniform_int_distribution<int> pick_axis(1, 3);
    std::uniform_real_distribution<double> pick_angle(0.0, 2 * std::numbers::pi);
    std::vector<Pauli> axes(n * m);
    ParamVector theta(n * m);
    for (std::size_t p = 0; p < n * m; ++p) {
        axes[p] = static_cast<Pauli>(pick_axis(rng));
        theta[p] = pick_angle(rng);
    }
    return {LayeredAnsatz(n, m, std::move(axes)), std::move(theta)};
}

}  // namespace qndm

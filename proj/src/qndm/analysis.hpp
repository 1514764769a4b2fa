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


#ifndef QNDM_ANALYSIS_HPP
#define QNDM_ANALYSIS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "qndm/estimators.hpp"
#include "qndm/pauli.hpp"

namespace qndm {

/// lambda = 1 / sqrt(sum_i |h_i|). Throws ConfigError when every coefficient is 0.
double lambda_rule(const Observable &m);

enum class MseSource { Formula, Empirical };

struct MseReport {
    double bias_sq = 0;
    double variance = 0;
    double mse = 0;
    Method method = Method::DM;
    int order = 1;
    MseSource source = MseSource::Formula;
    std::optional<double> sigma_s2;  // DM: mean single-shot string variance
    std::optional<double> sigma_d2;  // QNDM: detector single-shot variance
    std::optional<double> d2G;       // QNDM: second lambda derivative of Im G
};

struct DmMseInputs {
    std::uint64_t shots = 1;
    double s = std::numbers::pi / 2;
    std::vector<double> coeffs;
    std::vector<double> sigma_s2;  // one per string
};

struct QndmMseInputs {
    std::uint64_t shots = 1;
    double s = std::numbers::pi / 2;
    double lambda = 0;
    double sigma_d2 = 0.25;
    double p0 = 0.5;
    double d2G = 0;
    double c1 = kDefaultC1;
    double c2 = kDefaultC2;
};

/// Order 1: sum_i h_i^2 sigma_i^2 / (2 N sin^2 s). Order 2: sum_i h_i^2
/// sigma_i^2 / (4 N sin^4 s). DM is unbiased.
MseReport dm_mse_formula(int order, const DmMseInputs &in);

/// variance = 4 sigma_D^2 / (N (1 - (2 P0 - 1)^2) (c lambda sin^p s)^2), which
/// with c1 = 4 (c2 = 8) is sigma_D^2 / (4 N sin^2 s lambda^2 (1 - x^2))
/// (sigma_D^2 / (16 N sin^4 s lambda^2 (1 - x^2))).
/// bias = lambda d2G / 2 expressed in derivative units, i.e. divided by
/// c sin^p s. Throws SingularError when (2 P0 - 1)^2 == 1.
MseReport qndm_mse_formula(int order, const QndmMseInputs &in);

/// Second lambda derivative of Im G at `lambda`, by central difference with
/// step lambda / 10.
double qndm_d2G(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                const DerivativeSpec &spec, double lambda, const std::vector<std::size_t> &term_order = {});

/// Runs `estimate(rng)` R times, repeat r seeded with mix_seed(seed, {r}).
/// bias_sq = (mean - oracle)^2, variance = unbiased sample variance.
MseReport empirical_mse(const std::function<double(Rng &)> &estimate, std::size_t repeats, double oracle,
                        std::uint64_t seed, Method method, int order);

/// Smallest N_DM whose DM formula MSE does not exceed `target_mse`.
/// Throws ConfigError for target_mse <= 0.
std::uint64_t match_shots_dm(double target_mse, std::span<const double> coeffs, std::span<const double> sigma_s2,
                             double s, int order);

struct CostReport {
    Method method = Method::DM;
    int order = 1;
    std::uint64_t shots = 0;
    std::uint64_t J = 0;
    std::uint64_t k = 0;
    std::uint64_t n = 0;
    std::uint64_t formula_cost = 0;
    std::optional<std::uint64_t> measured_cost;
};

/// DM: 2 N J (k + n) (order 1), 4 N J (k + n) (order 2).
/// QNDM: N (3k + 8 J n) (order 1), N (7k + 16 J n) (order 2).
CostReport cost(Method method, int order, std::uint64_t shots, std::uint64_t J, std::uint64_t k, std::uint64_t n);

/// C_DM / C_QNDM.
double cost_ratio(const CostReport &dm, const CostReport &qndm);

}  // namespace qndm

#endif

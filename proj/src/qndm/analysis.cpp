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


#include "qndm/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "qndm/error.hpp"

namespace qndm {

double lambda_rule(const Observable &m) {
    const double total = m.abs_coeff_sum();
    require_config(total > 0, "lambda rule needs a nonzero coefficient");
    return 1.0 / std::sqrt(total);
}

namespace {

void check_common(int order, std::uint64_t shots, double s) {
    require_config(order == 1 || order == 2, "derivative order must be 1 or 2");
    require_config(shots >= 1, "MSE formula needs N >= 1");
    require_config(std::abs(std::sin(s)) > 1e-12, "shift s must have sin(s) != 0");
}

double sin_pow(double s, int order) {
    const double sn = std::sin(s);
    return order == 1 ? sn : sn * sn;
}

}  // namespace

MseReport dm_mse_formula(int order, const DmMseInputs &in) {
    check_common(order, in.shots, in.s);
    require(in.coeffs.size() == in.sigma_s2.size(), "one sigma_s^2 per Pauli string required");
    double weighted = 0;
    double mean_sigma = 0;
    for (std::size_t i = 0; i < in.coeffs.size(); ++i) {
        weighted += in.coeffs[i] * in.coeffs[i] * in.sigma_s2[i];
        mean_sigma += in.sigma_s2[i];
    }
    const double sp = sin_pow(in.s, order);
    const double denom = (order == 1 ? 2.0 : 4.0) * static_cast<double>(in.shots) * sp * sp;
    MseReport r;
    r.method = Method::DM;
    r.order = order;
    r.variance = weighted / denom;
    r.mse = r.variance;
    if (!in.coeffs.empty()) {
        r.sigma_s2 = mean_sigma / static_cast<double>(in.coeffs.size());
    }
    return r;
}

MseReport qndm_mse_formula(int order, const QndmMseInputs &in) {
    check_common(order, in.shots, in.s);
    require_config(in.lambda > 0, "QNDM MSE needs lambda > 0");
    const double x = 2 * in.p0 - 1;
    const double slope = 1 - x * x;
    if (!(slope > 0)) {
        throw SingularError("QNDM variance diverges at (2 P0 - 1)^2 = 1");
    }
    const double scale = (order == 1 ? in.c1 : in.c2) * sin_pow(in.s, order);
    const double scaled_lambda = scale * in.lambda;
    MseReport r;
    r.method = Method::QNDM;
    r.order = order;
    r.variance = 4 * in.sigma_d2 / (static_cast<double>(in.shots) * slope * scaled_lambda * scaled_lambda);
    const double bias = in.lambda * in.d2G / 2 / scale;
    r.bias_sq = bias * bias;
    r.mse = r.bias_sq + r.variance;
    r.sigma_d2 = in.sigma_d2;
    r.d2G = in.d2G;
    return r;
}

double qndm_d2G(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                const DerivativeSpec &spec, double lambda, const std::vector<std::size_t> &term_order) {
    require_config(lambda > 0, "d2G needs lambda > 0");
    const double h = lambda / 10;
    const double up = qndm_exact_G(ansatz, theta, m, spec, lambda + h, term_order).imag();
    const double mid = qndm_exact_G(ansatz, theta, m, spec, lambda, term_order).imag();
    const double down = qndm_exact_G(ansatz, theta, m, spec, lambda - h, term_order).imag();
    return (up - 2 * mid + down) / (h * h);
}

MseReport empirical_mse(const std::function<double(Rng &)> &estimate, std::size_t repeats, double oracle,
                        std::uint64_t seed, Method method, int order) {
    require_config(repeats >= 2, "empirical MSE needs R >= 2");
    std::vector<double> values(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        Rng rng(mix_seed(seed, {r}));
        values[r] = estimate(rng);
    }
    double mean = 0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(repeats);
    double ss = 0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    MseReport rep;
    rep.method = method;
    rep.order = order;
    rep.source = MseSource::Empirical;
    rep.bias_sq = (mean - oracle) * (mean - oracle);
    rep.variance = ss / static_cast<double>(repeats - 1);
    rep.mse = rep.bias_sq + rep.variance;
    return rep;
}

std::uint64_t match_shots_dm(double target_mse, std::span<const double> coeffs, std::span<const double> sigma_s2,
                             double s, int order) {
    require_config(target_mse > 0 && std::isfinite(target_mse), "shot matching needs target MSE > 0");
    require_config(order == 1 || order == 2, "derivative order must be 1 or 2");
    require_config(std::abs(std::sin(s)) > 1e-12, "shift s must have sin(s) != 0");
    require(coeffs.size() == sigma_s2.size(), "one sigma_s^2 per Pauli string required");
    double weighted = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        weighted += coeffs[i] * coeffs[i] * sigma_s2[i];
    }
    const double sp = sin_pow(s, order);
    const double exact = weighted / ((order == 1 ? 2.0 : 4.0) * sp * sp * target_mse);
    // Guard against ceil() turning a round-off excess like 500.0000000001 into 501.
    const double n = std::ceil(exact * (1 - 1e-12));
    require_config(n < 9.0e18, "matched DM shot count overflows");
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

CostReport cost(Method method, int order, std::uint64_t shots, std::uint64_t J, std::uint64_t k, std::uint64_t n) {
    require_config(order == 1 || order == 2, "derivative order must be 1 or 2");
    require_config(shots >= 1 && J >= 1 && k >= 1 && n >= 1, "cost model inputs must be >= 1");
    CostReport r{method, order, shots, J, k, n, 0, std::nullopt};
    if (method == Method::DM) {
        r.formula_cost = (order == 1 ? 2 : 4) * shots * J * (k + n);
    } else {
        r.formula_cost = order == 1 ? shots * (3 * k + 8 * J * n) : shots * (7 * k + 16 * J * n);
    }
    return r;
}

double cost_ratio(const CostReport &dm, const CostReport &qndm) {
    require(dm.method == Method::DM && qndm.method == Method::QNDM, "cost ratio takes (DM, QNDM)");
    return static_cast<double>(dm.formula_cost) / static_cast<double>(qndm.formula_cost);
}

}  // namespace qndm

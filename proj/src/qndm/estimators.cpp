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

#include "qndm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "qndm/accounting.hpp"
#include "qndm/error.hpp"
#include "qndm/measurement.hpp"

namespace qndm {

const char *to_string(Method m) { return m == Method::DM ? "dm" : "qndm"; }

void DerivativeSpec::validate(std::size_t num_params) const {
    require_config(order == 1 || order == 2, "derivative order must be 1 or 2");
    require_config(std::isfinite(s) && std::abs(std::sin(s)) > 1e-12, "shift s must have sin(s) != 0");
    require(dir < num_params, "direction " + std::to_string(dir) + " out of range for " + std::to_string(num_params) +
                                  " parameters");
    if (order == 2) {
        require(dir2 < num_params, "second direction " + std::to_string(dir2) + " out of range for " +
                                       std::to_string(num_params) + " parameters");
    }
}

double DerivativeSpec::divisor() const {
    const double sn = std::sin(s);
    return order == 1 ? 2 * sn : 4 * sn * sn;
}

std::vector<ShiftedPoint> shifted_points(std::span<const double> theta, const DerivativeSpec &spec) {
    spec.validate(theta.size());
    const double s = spec.s;
    if (spec.order == 1) {
        return {{shift(theta, spec.dir, +s), +1}, {shift(theta, spec.dir, -s), -1}};
    }
    auto both = [&](double a, double b) {
        ParamVector p = shift(theta, spec.dir, a * s);
        p[spec.dir2] += b * s;
        return p;
    };
    return {{both(+1, +1), +1}, {both(-1, +1), -1}, {both(+1, -1), -1}, {both(-1, -1), +1}};
}

void QndmSettings::validate(std::size_t num_terms) const {
    require_config(std::isfinite(lambda) && lambda >= 0, "coupling lambda must be >= 0");
    require_config(std::isfinite(s) && std::abs(std::sin(s)) > 1e-12, "shift s must have sin(s) != 0");
    require_config(c1 > 0 && c2 > 0, "normalization constants must be positive");
    if (!term_order.empty()) {
        require_config(term_order.size() == num_terms, "term order must list every observable term once");
        std::vector<bool> seen(num_terms, false);
        for (auto i : term_order) {
            require_config(i < num_terms && !seen[i], "term order must be a permutation");
            seen[i] = true;
        }
    }
}

namespace {

void check_problem(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m) {
    require(theta.size() == ansatz.num_params(), "parameter vector length does not match ansatz");
    require(m.num_qubits() == ansatz.num_qubits(), "observable and ansatz act on different qubit counts");
}

StateVector prepare(const LayeredAnsatz &ansatz, std::span<const double> theta) {
    StateVector psi = init_state(ansatz.num_qubits(), false);
    apply_circuit(psi, build_circuit(ansatz, theta));
    return psi;
}

}  // namespace

double exact_cost(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m) {
    check_problem(ansatz, theta, m);
    return expectation(prepare(ansatz, theta), m);
}

double exact_derivative_oracle(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                               const DerivativeSpec &spec) {
    check_problem(ansatz, theta, m);
    double acc = 0;
    for (const auto &pt : shifted_points(theta, spec)) {
        acc += pt.sign * exact_cost(ansatz, pt.theta, m);
    }
    return acc / spec.divisor();
}

// ---------------------------------------------------------------------------
// Direct measurement

DmExperiment::DmExperiment(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                           DerivativeSpec spec)
    : spec_(spec) {
    check_problem(ansatz, theta, m);
    const std::size_t n = ansatz.num_qubits();
    coeffs_.reserve(m.num_terms());
    for (const auto &t : m.terms()) {
        coeffs_.push_back(t.coeff);
    }
    for (const auto &pt : shifted_points(theta, spec_)) {
        points_.push_back(pt.sign);
        const StateVector psi = prepare(ansatz, pt.theta);
        const GateTally u = psi.tally();
        for (const auto &t : m.terms()) {
            StateVector rotated = psi;
            rotated.reset_tally();
            apply_circuit(rotated, basis_change_circuit(t.string));
            plus_.push_back(plus_one_probability(rotated, t.string));
            units_per_shot_ += dm_execution_units(u, n);
            raw_per_shot_ += u.total() + rotated.tally().total();
        }
    }
}

DerivativeEstimate DmExperiment::make_estimate(double value, std::uint64_t shots) const {
    DerivativeEstimate e;
    e.value = value;
    e.method = Method::DM;
    e.order = spec_.order;
    e.dir = spec_.dir;
    e.dir2 = spec_.order == 2 ? spec_.dir2 : spec_.dir;
    e.shots = shots;
    e.measured_gate_cost = units_per_shot_ * shots;
    e.raw_gate_count = raw_per_shot_ * shots;
    return e;
}

DerivativeEstimate DmExperiment::exact(std::uint64_t shots_for_cost) const {
    const std::size_t terms = coeffs_.size();
    double acc = 0;
    for (std::size_t p = 0; p < points_.size(); ++p) {
        double f = 0;
        for (std::size_t i = 0; i < terms; ++i) {
            f += coeffs_[i] * (2 * plus_[p * terms + i] - 1);
        }
        acc += points_[p] * f;
    }
    return make_estimate(acc / spec_.divisor(), shots_for_cost);
}

// Only the parity of the measured sites enters the eigenvalue, so the
// multinomial over bitstrings is drawn directly as its +1/-1 marginal.
DerivativeEstimate DmExperiment::sample(std::uint64_t shots, Rng &rng) const {
    require_config(shots >= 1, "DM needs at least one shot");
    const std::size_t terms = coeffs_.size();
    const double inv = 1.0 / static_cast<double>(shots);
    double acc = 0;
    for (std::size_t p = 0; p < points_.size(); ++p) {
        double f = 0;
        for (std::size_t i = 0; i < terms; ++i) {
            const double plus = plus_[p * terms + i];
            const double dist[2] = {plus, 1.0 - plus};
            const auto counts = sample_counts(dist, shots, rng);
            const double mean = (static_cast<double>(counts[0]) - static_cast<double>(counts[1])) * inv;
            f += coeffs_[i] * mean;
        }
        acc += points_[p] * f;
    }
    return make_estimate(acc / spec_.divisor(), shots);
}

std::vector<double> DmExperiment::pilot_sigma2(std::uint64_t pilot_shots, Rng &rng) const {
    require_config(pilot_shots >= 1, "pilot batch needs at least one shot");
    const std::size_t terms = coeffs_.size();
    std::vector<double> out(terms, 0.0);
    for (std::size_t p = 0; p < points_.size(); ++p) {
        for (std::size_t i = 0; i < terms; ++i) {
            const double plus = plus_[p * terms + i];
            const double dist[2] = {plus, 1.0 - plus};
            const auto counts = sample_counts(dist, pilot_shots, rng);
            const double mean = (static_cast<double>(counts[0]) - static_cast<double>(counts[1])) /
                                static_cast<double>(pilot_shots);
            out[i] += (1 - mean * mean) / static_cast<double>(points_.size());
        }
    }
    return out;
}

std::vector<double> DmExperiment::exact_sigma2() const {
    const std::size_t terms = coeffs_.size();
    std::vector<double> out(terms, 0.0);
    for (std::size_t p = 0; p < points_.size(); ++p) {
        for (std::size_t i = 0; i < terms; ++i) {
            const double mean = 2 * plus_[p * terms + i] - 1;
            out[i] += (1 - mean * mean) / static_cast<double>(points_.size());
        }
    }
    return out;
}

DerivativeEstimate dm_derivative(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                                 const DerivativeSpec &spec, std::uint64_t shots, Rng &rng, Mode mode) {
    require_config(shots >= 1, "DM needs at least one shot");
    DmExperiment exp(ansatz, theta, m, spec);
    return mode == Mode::Exact ? exp.exact(shots) : exp.sample(shots, rng);
}

// ---------------------------------------------------------------------------
// Detector-phase protocol

namespace {

void append(Circuit &out, Circuit &&part) {
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
}

void append_coupling(Circuit &out, const Observable &m, const std::vector<std::size_t> &order, double signed_lambda) {
    for (std::size_t k = 0; k < m.num_terms(); ++k) {
        const Term &t = m[order.empty() ? k : order[k]];
        out.push_back(DetectorCoupling{signed_lambda * t.coeff, t.string});
    }
}

// U_y blocks: the first is U(p_0); each later one is U^dagger(p_{y-1}) U(p_y).
// Couplings alternate -lambda, +lambda after each block.
Circuit coupled_evolution(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                          const DerivativeSpec &spec, double lambda, const std::vector<std::size_t> &order) {
    check_problem(ansatz, theta, m);
    spec.validate(theta.size());
    std::vector<ParamVector> seq;
    const double s = spec.s;
    if (spec.order == 1) {
        seq = {shift(theta, spec.dir, -s), shift(theta, spec.dir, +s)};
    } else {
        auto both = [&](double a, double b) {
            ParamVector p = shift(theta, spec.dir, a * s);
            p[spec.dir2] += b * s;
            return p;
        };
        seq = {both(+1, -1), both(-1, -1), both(-1, +1), both(+1, +1)};
    }
    Circuit out;
    for (std::size_t y = 0; y < seq.size(); ++y) {
        if (y > 0) {
            append(out, build_circuit(ansatz, seq[y - 1], true));
        }
        append(out, build_circuit(ansatz, seq[y]));
        append_coupling(out, m, order, (y % 2 == 0) ? -lambda : +lambda);
    }
    return out;
}

}  // namespace

Circuit qndm_circuit(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                     const DerivativeSpec &spec, const QndmSettings &settings, bool with_readout) {
    settings.validate(m.num_terms());
    Circuit out = coupled_evolution(ansatz, theta, m, spec, settings.lambda, settings.term_order);
    if (with_readout) {
        const std::size_t d = ansatz.num_qubits();
        out.push_back(phase_sdg(d));
        out.push_back(hadamard(d));
    }
    return out;
}

std::complex<double> qndm_exact_G(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                                  const DerivativeSpec &spec, double lambda,
                                  const std::vector<std::size_t> &term_order) {
    require_config(std::isfinite(lambda), "lambda must be finite");
    StateVector psi = init_state(ansatz.num_qubits(), true);
    apply_circuit(psi, coupled_evolution(ansatz, theta, m, spec, lambda, term_order));
    const std::size_t half = std::size_t{1} << ansatz.num_qubits();
    std::complex<double> off = 0;
    for (std::size_t x = 0; x < half; ++x) {
        off += psi[x] * std::conj(psi[x | half]);
    }
    return off / 0.5;
}

QndmExperiment::QndmExperiment(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                               DerivativeSpec spec, QndmSettings settings)
    : spec_(spec), settings_(std::move(settings)) {
    require_config(settings_.lambda > 0, "QNDM estimate needs lambda > 0");
    spec_.s = settings_.s;
    StateVector psi = init_state(ansatz.num_qubits(), true);
    apply_circuit(psi, qndm_circuit(ansatz, theta, m, spec_, settings_));
    p0_ = exact_probability(psi, ansatz.num_qubits(), 0);
    units_per_shot_ = qndm_execution_units(psi.tally(), ansatz.num_qubits());
    raw_per_shot_ = psi.tally().total() + 1;  // + detector preparation
}

double QndmExperiment::value_from_p0(double p0) const {
    const double sn = std::sin(spec_.s);
    const double denom = spec_.order == 1 ? settings_.c1 * settings_.lambda * sn : settings_.c2 * settings_.lambda * sn * sn;
    return -std::asin(std::clamp(2 * p0 - 1, -1.0, 1.0)) / denom;
}

DerivativeEstimate QndmExperiment::make_estimate(double value, std::uint64_t shots) const {
    DerivativeEstimate e;
    e.value = value;
    e.method = Method::QNDM;
    e.order = spec_.order;
    e.dir = spec_.dir;
    e.dir2 = spec_.order == 2 ? spec_.dir2 : spec_.dir;
    e.shots = shots;
    e.lambda = settings_.lambda;
    e.measured_gate_cost = units_per_shot_ * shots;
    e.raw_gate_count = raw_per_shot_ * shots;
    return e;
}

DerivativeEstimate QndmExperiment::exact(std::uint64_t shots_for_cost) const {
    return make_estimate(value_from_p0(p0_), shots_for_cost);
}

DerivativeEstimate QndmExperiment::sample(std::uint64_t shots, Rng &rng) const {
    require_config(shots >= 1, "QNDM needs at least one shot");
    const double dist[2] = {p0_, 1.0 - p0_};
    const auto counts = sample_counts(dist, shots, rng);
    DetectorStats stats{shots, counts[0]};
    DerivativeEstimate e = make_estimate(value_from_p0(stats.p0_hat()), shots);
    e.detector = stats;
    return e;
}

DerivativeEstimate qndm_derivative(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                                   const DerivativeSpec &spec, const QndmSettings &settings, std::uint64_t shots,
                                   Rng &rng, Mode mode) {
    QndmExperiment exp(ansatz, theta, m, spec, settings);
    return mode == Mode::Exact ? exp.exact(shots) : exp.sample(shots, rng);
}

// ---------------------------------------------------------------------------
// Normalization calibration

CalibrationResult calibrate_normalization(std::span<const double> lambda_grid, std::span<const CalibrationCase> cases,
                                          double tolerance) {
    require_config(lambda_grid.size() >= 2, "calibration needs at least two lambda values");
    require_config(!cases.empty(), "calibration needs at least one case");
    std::vector<double> grid(lambda_grid.begin(), lambda_grid.end());
    std::sort(grid.begin(), grid.end(), std::greater<>());
    for (double l : grid) {
        require_config(l > 0 && std::isfinite(l), "calibration lambdas must be positive");
    }

    const LayeredAnsatz ansatz = LayeredAnsatz::uniform(1, 1, Pauli::X);
    const Observable z({Term{1.0, PauliString::parse("Z")}});

    CalibrationResult result;
    std::ostringstream rep;
    rep << std::setprecision(10);
    rep << "# detector-phase normalization calibration\n";
    rep << "# family: n = 1, M = Z, one RX layer (f = cos theta)\n";
    rep << "# ratio = -asin(2 P0 - 1) / (lambda sin^p s g_exact), p = order\n";
    rep << "# order theta s lambda ratio\n";

    for (int order = 1; order <= 2; ++order) {
        std::vector<double> extrapolated;
        double last_step = 0;
        for (const auto &c : cases) {
            const ParamVector theta{c.theta};
            const DerivativeSpec spec = order == 1 ? DerivativeSpec::first(0, c.s) : DerivativeSpec::second(0, 0, c.s);
            const double g = exact_derivative_oracle(ansatz, theta, z, spec);
            require_config(std::abs(g) > 1e-6, "calibration case has a vanishing derivative");
            std::vector<double> ratios;
            for (double l : grid) {
                QndmSettings st;
                st.lambda = l;
                st.s = c.s;
                st.c1 = 1.0;
                st.c2 = 1.0;
                QndmExperiment exp(ansatz, theta, z, spec, st);
                // value_from_p0 with unit constants is -asin(2 P0 - 1) / (lambda sin^p s).
                const double r = exp.value_from_p0(exp.p0()) / g;
                ratios.push_back(r);
                result.points.push_back({order, c.theta, c.s, l, r});
                rep << order << ' ' << c.theta << ' ' << c.s << ' ' << l << ' ' << r << '\n';
            }
            // Leading error is even in lambda; eliminate the lambda^2 term from
            // the two smallest couplings.
            const std::size_t k = ratios.size() - 1;
            const double q = grid[k - 1] / grid[k];
            const double ext = (q * q * ratios[k] - ratios[k - 1]) / (q * q - 1);
            extrapolated.push_back(ext);
            last_step = std::max(last_step, std::abs(ratios[k] - ext) / std::abs(ext));
        }
        const double mean = std::accumulate(extrapolated.begin(), extrapolated.end(), 0.0) /
                            static_cast<double>(extrapolated.size());
        double spread = 0;
        for (double e : extrapolated) {
            spread = std::max(spread, std::abs(e - mean) / std::abs(mean));
        }
        const double residual = std::max(spread, last_step);
        (order == 1 ? result.c1 : result.c2) = mean;
        (order == 1 ? result.residual1 : result.residual2) = residual;
        if (!(residual < tolerance)) {
            std::ostringstream msg;
            msg << "normalization calibration did not converge at order " << order << " (residual " << residual
                << " >= " << tolerance << ")";
            throw CalibrationError(msg.str());
        }
    }

    rep << "c1 = " << result.c1 << '\n';
    rep << "c2 = " << result.c2 << '\n';
    rep << "residual1 = " << result.residual1 << '\n';
    rep << "residual2 = " << result.residual2 << '\n';
    rep << "default_c1 = " << kDefaultC1 << '\n';
    rep << "default_c2 = " << kDefaultC2 << '\n';
    // The alternative first-order denominator 2 lambda sin s scales every
    // estimate by c1 / 2.
    rep << "alt_c1 = 2\n";
    rep << "alt_c1_relative_error = " << (result.c1 / 2.0 - 1.0) << '\n';
    rep << "alt_c1_verdict = " << (std::abs(result.c1 / 2.0 - 1.0) < tolerance ? "consistent" : "rejected") << '\n';
    result.report = rep.str();
    return result;
}

CalibrationResult calibrate_normalization() {
    static constexpr double kGrid[] = {0.04, 0.02, 0.01, 0.005};
    static constexpr CalibrationCase kCases[] = {
        {0.3, std::numbers::pi / 2}, {1.0, std::numbers::pi / 2}, {2.2, std::numbers::pi / 2},
        {0.3, 1.0},                  {1.0, 1.0},                  {2.2, 1.0},
    };
    return calibrate_normalization(kGrid, kCases);
}

}  // namespace qndm

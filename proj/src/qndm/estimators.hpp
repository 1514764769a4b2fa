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

#ifndef QNDM_ESTIMATORS_HPP
#define QNDM_ESTIMATORS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qndm/ansatz.hpp"
#include "qndm/circuit.hpp"
#include "qndm/pauli.hpp"
#include "qndm/random.hpp"
#include "qndm/statevector.hpp"

namespace qndm {

enum class Method { DM, QNDM };
enum class Mode { Exact, Sampled };

const char *to_string(Method m);

/// Normalization of the detector-phase estimators: the derivative is
/// -asin(2 P0 - 1) / (c1 lambda sin s) at first order and
/// -asin(2 P0 - 1) / (c2 lambda sin^2 s) at second order. These are the values
/// calibrate_normalization converges to.
inline constexpr double kDefaultC1 = 4.0;
inline constexpr double kDefaultC2 = 8.0;

/// Which derivative to take: order 1 along `dir`, or order 2 along
/// (`dir2`, `dir`), with shift `s`.
struct DerivativeSpec {
    int order = 1;
    std::size_t dir = 0;
    std::size_t dir2 = 0;
    double s = std::numbers::pi / 2;

    static DerivativeSpec first(std::size_t l, double s = std::numbers::pi / 2) { return {1, l, l, s}; }
    static DerivativeSpec second(std::size_t l, std::size_t w, double s = std::numbers::pi / 2) { return {2, l, w, s}; }

    /// Throws ConfigError on a bad order or sin(s) == 0, ContractError on an
    /// out-of-range direction.
    void validate(std::size_t num_params) const;
    /// 2 sin s (order 1) or 4 sin^2 s (order 2).
    double divisor() const;
};

/// One parameter point of the shift rule and its sign in the combination.
struct ShiftedPoint {
    ParamVector theta;
    int sign;
};

/// Order 1: theta + s e_l (+), theta - s e_l (-).
/// Order 2: theta + s(e_l + e_w) (+), theta + s(-e_l + e_w) (-),
///          theta + s(e_l - e_w) (-), theta - s(e_l + e_w) (+).
std::vector<ShiftedPoint> shifted_points(std::span<const double> theta, const DerivativeSpec &spec);

struct QndmSettings {
    double lambda = 0.1;
    double s = std::numbers::pi / 2;
    double c1 = kDefaultC1;
    double c2 = kDefaultC2;
    /// Order in which the per-term couplings are applied; empty means the
    /// observable's own term order.
    std::vector<std::size_t> term_order;

    void validate(std::size_t num_terms) const;
};

struct DetectorStats {
    std::uint64_t shots = 0;
    std::uint64_t count0 = 0;

    double p0_hat() const { return static_cast<double>(count0) / static_cast<double>(shots); }
    double sigma_d2_hat() const { return p0_hat() * (1.0 - p0_hat()); }
};

struct DerivativeEstimate {
    double value = 0;
    Method method = Method::DM;
    int order = 1;
    std::size_t dir = 0;
    std::size_t dir2 = 0;
    std::uint64_t shots = 0;
    std::optional<double> lambda;
    /// Accounting units summed over every execution (see accounting.hpp).
    std::uint64_t measured_gate_cost = 0;
    /// Primitive gates the engine would apply over every execution.
    std::uint64_t raw_gate_count = 0;
    std::optional<double> oracle_value;
    std::optional<DetectorStats> detector;
};

/// f(theta) = <0|U^dagger(theta) M U(theta)|0>, exact.
double exact_cost(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m);

/// Parameter-shift combination of exact_cost values (exact derivative).
double exact_derivative_oracle(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                               const DerivativeSpec &spec);

/// Direct-measurement protocol, prepared once per (ansatz, theta, M, spec).
/// Preparation simulates each shifted circuit and rotates into every string's
/// measurement basis; sampling then only draws shot outcomes.
class DmExperiment {
   public:
    DmExperiment(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m, DerivativeSpec spec);

    const DerivativeSpec &spec() const { return spec_; }
    std::size_t num_points() const { return points_.size(); }
    std::size_t num_terms() const { return coeffs_.size(); }

    /// Probability of eigenvalue +1 for term i at shifted point p.
    double plus_probability(std::size_t point, std::size_t term) const { return plus_[point * coeffs_.size() + term]; }

    /// Estimate from exact per-string expectations (the N -> infinity limit).
    DerivativeEstimate exact(std::uint64_t shots_for_cost) const;
    /// N shots per (point, string) pair.
    DerivativeEstimate sample(std::uint64_t shots, Rng &rng) const;

    /// Per-string single-shot variance 1 - <P_i>^2 averaged over the shifted
    /// points, from a pilot batch of `pilot_shots` per (point, string).
    std::vector<double> pilot_sigma2(std::uint64_t pilot_shots, Rng &rng) const;
    std::vector<double> exact_sigma2() const;

    std::uint64_t execution_units_per_shot() const { return units_per_shot_; }
    std::uint64_t raw_gates_per_shot() const { return raw_per_shot_; }

   private:
    DerivativeEstimate make_estimate(double value, std::uint64_t shots) const;

    DerivativeSpec spec_;
    std::vector<int> points_;  // signs
    std::vector<double> coeffs_;
    std::vector<double> plus_;
    std::uint64_t units_per_shot_ = 0;
    std::uint64_t raw_per_shot_ = 0;
};

/// One-call DM estimate. Exact mode replaces sampled means by exact
/// expectations but still reports the cost of `shots` shots.
DerivativeEstimate dm_derivative(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                                 const DerivativeSpec &spec, std::uint64_t shots, Rng &rng,
                                 Mode mode = Mode::Sampled);

/// QNDM gate list on n system qubits + detector: U1, coupling(-lambda), U2,
/// coupling(+lambda) [, U3, coupling(-lambda), U4, coupling(+lambda)], then the
/// detector readout S-dagger, H. Each coupling is the ordered product of
/// exp(i a h_i lambda Z_d (x) P_i) over the terms. The detector preparation is
/// part of init_state, not of this list.
Circuit qndm_circuit(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                     const DerivativeSpec &spec, const QndmSettings &settings, bool with_readout = true);

/// Quasi-characteristic function: <0|rho_D|1> after the coupled evolution
/// divided by its initial value 1/2. No readout is applied.
std::complex<double> qndm_exact_G(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                                  const DerivativeSpec &spec, double lambda,
                                  const std::vector<std::size_t> &term_order = {});

/// Detector-phase protocol, prepared once: simulates the full circuit with
/// readout and keeps the detector's outcome distribution.
class QndmExperiment {
   public:
    QndmExperiment(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m, DerivativeSpec spec,
                   QndmSettings settings);

    double p0() const { return p0_; }
    const QndmSettings &settings() const { return settings_; }

    /// -asin(2 p0 - 1) / (c lambda sin^order s).
    double value_from_p0(double p0) const;

    DerivativeEstimate exact(std::uint64_t shots_for_cost) const;
    DerivativeEstimate sample(std::uint64_t shots, Rng &rng) const;

    std::uint64_t execution_units_per_shot() const { return units_per_shot_; }
    std::uint64_t raw_gates_per_shot() const { return raw_per_shot_; }

   private:
    DerivativeEstimate make_estimate(double value, std::uint64_t shots) const;

    DerivativeSpec spec_;
    QndmSettings settings_;
    double p0_ = 0.5;
    std::uint64_t units_per_shot_ = 0;
    std::uint64_t raw_per_shot_ = 0;
};

/// One-call QNDM estimate; throws ConfigError for lambda <= 0.
DerivativeEstimate qndm_derivative(const LayeredAnsatz &ansatz, std::span<const double> theta, const Observable &m,
                                   const DerivativeSpec &spec, const QndmSettings &settings, std::uint64_t shots,
                                   Rng &rng, Mode mode = Mode::Sampled);

/// One row of the normalization fit.
struct CalibrationPoint {
    int order;
    double theta;
    double s;
    double lambda;
    double ratio;  // -asin(2 P0 - 1) / (lambda sin^order s g_exact)
};

struct CalibrationCase {
    double theta;
    double s;
};

struct CalibrationResult {
    double c1 = 0;
    double c2 = 0;
    double residual1 = 0;  // relative
    double residual2 = 0;
    std::vector<CalibrationPoint> points;
    std::string report;
};

/// Fits the limiting normalization constants on one-qubit cases (M = Z, one
/// RX layer, where f = cos theta) by Richardson extrapolation over a halving
/// lambda grid. Throws CalibrationError when the spread of the extrapolated
/// constants or the last-step change exceeds `tolerance` (relative).
CalibrationResult calibrate_normalization(std::span<const double> lambda_grid, std::span<const CalibrationCase> cases,
                                          double tolerance = 0.01);
CalibrationResult calibrate_normalization();

}  // namespace qndm

#endif

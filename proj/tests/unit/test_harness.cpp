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

#include <cmath>
#include <filesystem>

#include "qndm/analysis.hpp"
#include "qndm/error.hpp"
#include "qndm/harness.hpp"

namespace qndm {
namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 3;
    c.L = 3;
    c.R = 5;
    c.shots = 200;
    c.seed = 17;
    c.pilot_shots = 50;
    c.threads = 1;
    c.J_grid = {4, 8};
    c.m_grid = {1, 2};
    c.lines = {3};
    return c;
}

void expect_same(const RealizationRecord &a, const RealizationRecord &b) {
    EXPECT_EQ(a.m, b.m);
    EXPECT_EQ(a.l, b.l);
    EXPECT_EQ(a.oracle, b.oracle);
    EXPECT_EQ(a.lambda, b.lambda);
    EXPECT_EQ(a.dm.value, b.dm.value);
    EXPECT_EQ(a.qndm.value, b.qndm.value);
    EXPECT_EQ(a.dm.mse_emp, b.dm.mse_emp);
    EXPECT_EQ(a.qndm.mse_emp, b.qndm.mse_emp);
    EXPECT_EQ(a.dm.shots, b.dm.shots);
    EXPECT_EQ(a.ratio, b.ratio);
}

TEST(Harness, RealizationIsDeterministic) {
    const auto c = small_config();
    for (auto kind : {SweepKind::MseVsJ, SweepKind::RatioVsJ}) {
        const SweepPoint p{4, kind == SweepKind::MseVsJ ? 0u : 2u};
        expect_same(run_realization(c, kind, p, 1), run_realization(c, kind, p, 1));
    }
    EXPECT_NE(realization_seed(c, {4, 0}, 0), realization_seed(c, {4, 0}, 1));
    EXPECT_NE(realization_seed(c, {4, 0}, 0), realization_seed(c, {8, 0}, 0));
}

TEST(Harness, OneQubitOracleIsAnalytic) {
    // Reproduce the instance draw and evaluate d/dtheta <0|R_a(theta)^dagger h P R_a(theta)|0> by hand.
    ExperimentConfig c = small_config();
    c.n = 1;
    c.J_grid = {1};
    c.m_grid = {1};
    for (std::size_t index = 0; index < 8; ++index) {
        const SweepPoint p{1, 1};
        const auto rec = run_realization(c, SweepKind::MseVsJ, p, index);
        Rng inst(stream_seed(realization_seed(c, p, index), Stream::Instance));
        const auto a = random_ansatz(1, 1, inst);
        const auto obs = random_observable(1, 1, c.coeff_std, inst);
        const double t = a.theta[0];
        const double h = obs[0].coeff;
        const Pauli axis = a.ansatz.axis(0, 0);
        const Pauli meas = obs[0].string[0];
        double dfdt = 0;  // derivative of <P> for R_axis(t)|0>
        if (meas == Pauli::Z && axis != Pauli::Z) {
            dfdt = -std::sin(t);
        } else if (axis == Pauli::X && meas == Pauli::Y) {
            dfdt = -std::cos(t);
        } else if (axis == Pauli::Y && meas == Pauli::X) {
            dfdt = std::cos(t);
        }
        EXPECT_NEAR(rec.oracle, h * dfdt, 1e-12) << "index " << index;
        EXPECT_EQ(rec.k, 1u);
    }
}

TEST(Harness, RecordCostsFollowFormulas) {
    auto c = small_config();
    for (int order = 1; order <= 2; ++order) {
        c.order = order;
        const auto rec = run_realization(c, SweepKind::RatioVsJ, {4, 2}, 0);
        const std::uint64_t k = rec.k;
        const std::uint64_t J = rec.J;
        const std::uint64_t n = rec.n;
        const std::uint64_t Nq = rec.qndm.shots;
        const std::uint64_t Nd = rec.dm.shots;
        EXPECT_EQ(rec.qndm.cost_formula, order == 1 ? Nq * (3 * k + 8 * J * n) : Nq * (7 * k + 16 * J * n));
        EXPECT_EQ(rec.dm.cost_formula, (order == 1 ? 2 : 4) * Nd * J * (k + n));
        EXPECT_EQ(rec.qndm.cost_measured, rec.qndm.cost_formula);
        EXPECT_EQ(rec.dm.cost_measured, rec.dm.cost_formula);
        EXPECT_TRUE(rec.matched);
        EXPECT_DOUBLE_EQ(rec.ratio, static_cast<double>(rec.dm.cost_formula) / rec.qndm.cost_formula);
    }
}

TEST(Harness, MatchedShotsMeetQndmMse) {
    auto c = small_config();
    const auto rec = run_realization(c, SweepKind::RatioVsK, {8, 1}, 2);
    // The DM formula MSE at the matched N does not exceed the QNDM target.
    EXPECT_LE(rec.dm.mse_formula, rec.qndm.mse_emp * (1 + 1e-9));
}

TEST(Harness, SweepIndependentOfThreadCount) {
    auto c = small_config();
    const auto one = run_sweep(c, SweepKind::MseVsJ);
    c.threads = 3;
    const auto three = run_sweep(c, SweepKind::MseVsJ);
    EXPECT_EQ(mse_csv(one), mse_csv(three));
    ASSERT_EQ(one.rows.size(), 2u);
    EXPECT_EQ(one.rows[0].records.size(), 3u);
}

TEST(Harness, RowRatioIsMeanOfRecordFormulas) {
    auto c = small_config();
    const auto res = run_sweep(c, SweepKind::RatioVsJ);
    for (const auto &row : res.rows) {
        double mean = 0;
        for (const auto &r : row.records) {
            const auto dm = cost(Method::DM, 1, r.dm.shots, r.J, r.k, r.n);
            const auto q = cost(Method::QNDM, 1, r.qndm.shots, r.J, r.k, r.n);
            mean += cost_ratio(dm, q);
        }
        EXPECT_DOUBLE_EQ(row.mu_ratio, mean / static_cast<double>(row.records.size()));
        EXPECT_GT(row.dm.cost_formula, 0.0);
        EXPECT_GT(row.qndm.cost_formula, 0.0);
    }
}

TEST(Harness, CsvHeaders) {
    auto c = small_config();
    c.L = 1;
    const auto mse = run_sweep(c, SweepKind::MseVsJ);
    EXPECT_EQ(mse_csv(mse).substr(0, mse_csv(mse).find('\n')), "J,method,mu_g,mu_mse_emp,mu_mse_formula,shots,L,R,seed");
    c.J_grid = {4};
    const auto k = run_sweep(c, SweepKind::CostVsK);
    EXPECT_EQ(cost_csv(k).substr(0, cost_csv(k).find('\n')),
              "sweep_var,sweep_value,method,mu_cost_formula,mu_cost_measured,mu_shots,L,seed");
    EXPECT_EQ(ratio_csv(k).substr(0, ratio_csv(k).find('\n')),
              "sweep_var,sweep_value,fixed_var,fixed_value,mu_ratio,L,seed");
}

TEST(Harness, ValidationErrors) {
    auto c = small_config();
    c.J_grid.clear();
    EXPECT_THROW(run_sweep(c, SweepKind::MseVsJ), ConfigError);
    c = small_config();
    c.m_grid.clear();
    EXPECT_THROW(c.validate(SweepKind::CostVsK), ConfigError);
    c = small_config();
    c.R = 1;
    EXPECT_THROW(c.validate(SweepKind::MseVsJ), ConfigError);
    c = small_config();
    c.J_grid = {64};
    EXPECT_THROW(c.validate(SweepKind::MseVsJ), ConfigError);
    c = small_config();
    c.n = kDeskMaxQubits;
    EXPECT_THROW(c.validate(SweepKind::MseVsJ), ConfigError);
    c = small_config();
    EXPECT_THROW(c.validate(SweepKind::CostVsK), ConfigError);  // two J values
    EXPECT_THROW(preset_config("huge", SweepKind::MseVsJ), ConfigError);
}

TEST(Harness, PresetsRespectDeskScale) {
    for (const char *name : {"ci", "full"}) {
        for (auto kind : {SweepKind::MseVsJ, SweepKind::CostVsK, SweepKind::CostVsNJ, SweepKind::RatioVsJ,
                          SweepKind::RatioVsK}) {
            for (int order = 1; order <= 2; ++order) {
                const auto c = preset_config(name, kind, order);
                EXPECT_NO_THROW(c.validate(kind));
                EXPECT_LE(c.n + 1, kDeskMaxQubits);
            }
        }
    }
    EXPECT_EQ(preset_config("ci", SweepKind::MseVsJ).L, 10u);
    EXPECT_EQ(preset_config("full", SweepKind::MseVsJ).L, 100u);
    EXPECT_EQ(preset_config("full", SweepKind::CostVsK).L, 50u);
    EXPECT_EQ(preset_config("full", SweepKind::MseVsJ).n, 10u);
}

TEST(Harness, SweepKindNames) {
    for (auto kind :
         {SweepKind::MseVsJ, SweepKind::CostVsK, SweepKind::CostVsNJ, SweepKind::RatioVsJ, SweepKind::RatioVsK}) {
        EXPECT_EQ(sweep_kind_from_string(to_string(kind)), kind);
    }
    EXPECT_THROW(sweep_kind_from_string("bogus"), ConfigError);
}

TEST(Harness, WritesOutputs) {
    auto c = small_config();
    c.L = 1;
    const auto res = run_sweep(c, SweepKind::MseVsJ);
    const auto dir = std::filesystem::temp_directory_path() / "qndm_harness_test";
    std::filesystem::remove_all(dir);
    write_sweep_outputs(res, dir.string(), {{"command", "test"}});
    EXPECT_EQ(read_file((dir / "mse_sweep.csv").string()), mse_csv(res));
    const auto kv = parse_key_values(read_file((dir / "runcard.txt").string()));
    ASSERT_FALSE(kv.empty());
    EXPECT_EQ(kv.front().first, "command");
    bool has_version = false;
    for (const auto &[k, v] : kv) {
        has_version |= k == "version";
    }
    EXPECT_TRUE(has_version);
    std::filesystem::remove_all(dir);
}

TEST(LinearFit, ExactLine) {
    const double x[] = {1, 2, 3, 4};
    const double y[] = {3, 5, 7, 9};
    const auto f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    const double same[] = {1, 1};
    const double two[] = {1, 2};
    EXPECT_THROW(linear_fit(same, two), ConfigError);
}

}  // namespace
}  // namespace qndm

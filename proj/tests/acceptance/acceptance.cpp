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


// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
//
// Usage: qndm_acceptance [--cli PATH] [--full] [--only 1,2,...] [--expect-fail 7,8]
//
// Criterion 7 always runs both n = 6 and n = 10; --full adds the full-preset
// ratio sweeps to criterion 8.
//
// The exit status is 0 when every criterion passes or fails only as listed in
// --expect-fail. FAIL lines are printed either way.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qndm/accounting.hpp"
#include "qndm/analysis.hpp"
#include "qndm/estimators.hpp"
#include "qndm/harness.hpp"
#include "qndm/io.hpp"
#include "qndm/statevector.hpp"

namespace {

using namespace qndm;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kC1FdStep = 1e-5;
constexpr double kC1Tol = 1e-6;
constexpr double kC1MaxSeconds = 10;
constexpr double kC2RatioLo = 3.5;
constexpr double kC2RatioHi = 4.5;
constexpr double kC2MaxSeconds = 30;
constexpr double kC2MinBias = 1e-10;
constexpr double kC3MaxResidual = 0.01;
constexpr double kC3ConstTol = 0.01;
constexpr double kC3MaxSeconds = 10;
constexpr double kC4Tol = 1e-12;
constexpr double kC5Factor = 1.5;
constexpr double kC5MaxSeconds = 300;
constexpr double kC6AsymptoteTol = 0.05;
constexpr double kC7Fraction = 0.8;
constexpr double kC7MaxSeconds = 900;
constexpr double kC8MinR2 = 0.9;
constexpr double kC8MinRatio = 10;
constexpr double kC8MaxSeconds = 1800;
constexpr double kC9Tol = 1e-4;
constexpr double kC9Lambda = 1e-3;
constexpr double kC9FdStep = 1e-4;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    std::string cli;
    bool full = false;
};

struct Instance {
    LayeredAnsatz ansatz;
    ParamVector theta;
    Observable m;
};

Instance draw(std::size_t n, std::size_t m, std::size_t J, double coeff_std, Rng &rng) {
    auto a = random_ansatz(n, m, rng);
    return {a.ansatz, a.theta, random_observable(n, J, coeff_std, rng)};
}

double fd_first(const Instance &in, std::size_t l, double h) {
    return (exact_cost(in.ansatz, shift(in.theta, l, h), in.m) - exact_cost(in.ansatz, shift(in.theta, l, -h), in.m)) /
           (2 * h);
}

double fd_second(const Instance &in, std::size_t l, std::size_t w, double h) {
    auto at = [&](double x, double y) {
        ParamVector p = shift(in.theta, l, x);
        p[w] += y;
        return exact_cost(in.ansatz, p, in.m);
    };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

// 1. Exact-mode DM first derivatives against central finite differences.
Outcome parameter_shift_exactness(const Context &) {
    Rng rng(101);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 1 + i % 4;
        const std::size_t m = 1 + i % 3;
        const std::size_t J = std::min<std::size_t>(1 + i % 6, (std::size_t{1} << (2 * n)) - 1);
        const Instance in = draw(n, m, J, 1.0, rng);
        const std::size_t l = std::uniform_int_distribution<std::size_t>(0, in.theta.size() - 1)(rng);
        Rng unused(0);
        const double dm = dm_derivative(in.ansatz, in.theta, in.m, DerivativeSpec::first(l), 1, unused, Mode::Exact).value;
        worst = std::max(worst, std::abs(dm - fd_first(in, l, kC1FdStep)));
    }
    return {worst < kC1Tol, "20 instances, max |DM - FD| = " + fmt(worst) + " (tol " + fmt(kC1Tol) + ")"};
}

// 2. Exact-mode QNDM bias shrinks 4x per halving of lambda.
Outcome qndm_bias_law(const Context &) {
    Rng rng(202);
    double lo = 1e9;
    double hi = -1e9;
    double worst_final = 0;
    int used = 0;
    int degenerate = 0;
    for (int i = 0; used < 10; ++i) {
        const Instance in = draw(2 + i % 3, 1 + i % 3, 2 + i % 5, 1.0, rng);
        const std::size_t l = std::uniform_int_distribution<std::size_t>(0, in.theta.size() - 1)(rng);
        const auto spec = DerivativeSpec::first(l);
        const double g = exact_derivative_oracle(in.ansatz, in.theta, in.m, spec);
        std::vector<double> err;
        for (double lambda : {0.02, 0.01, 0.005}) {
            QndmSettings st;
            st.lambda = lambda;
            err.push_back(QndmExperiment(in.ansatz, in.theta, in.m, spec, st).exact(1).value - g);
        }
        // A parameter that does not reach the observable leaves no bias to measure.
        if (std::abs(err.front()) < kC2MinBias) {
            ++degenerate;
            continue;
        }
        ++used;
        for (std::size_t k = 0; k + 1 < err.size(); ++k) {
            const double r = err[k] / err[k + 1];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        worst_final = std::max(worst_final, std::abs(err.back()));
    }
    return {lo >= kC2RatioLo && hi <= kC2RatioHi,
            "10 instances, error ratios per halving in [" + fmt(lo) + ", " + fmt(hi) +
                "] (need [3.5, 4.5]); max |err| at 0.005 = " + fmt(worst_final) + "; " + std::to_string(degenerate) +
                " zero-bias draws skipped"};
}

// 3. Normalization calibration.
Outcome calibration(const Context &) {
    const auto cal = calibrate_normalization();
    const bool contrasted = cal.report.find("alt_c1 = 2") != std::string::npos &&
                            cal.report.find("alt_c1_verdict = rejected") != std::string::npos;
    const bool ok = cal.residual1 < kC3MaxResidual && cal.residual2 < kC3MaxResidual &&
                    std::abs(cal.c1 / kDefaultC1 - 1) < kC3ConstTol && std::abs(cal.c2 / kDefaultC2 - 1) < kC3ConstTol &&
                    contrasted;
    return {ok, "c1 = " + fmt(cal.c1) + ", c2 = " + fmt(cal.c2) + ", residuals " + fmt(cal.residual1) + " / " +
                    fmt(cal.residual2) + ", printed 2 lambda sin s denominator " +
                    (contrasted ? "rejected in report" : "not contrasted")};
}

// 4. Detector balance without coupling.
Outcome detector_symmetry(const Context &) {
    Rng rng(404);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 1 + i % 5;
        const Instance in = draw(n, 1 + i % 3, std::min<std::size_t>(1 + i % 7, (std::size_t{1} << (2 * n)) - 1), 5.0, rng);
        const std::size_t p = in.theta.size();
        const auto spec = i % 2 == 0 ? DerivativeSpec::first(i % p) : DerivativeSpec::second(i % p, (i / 2) % p);
        QndmSettings st;
        st.lambda = 0.0;
        StateVector psi = init_state(n, true);
        apply_circuit(psi, qndm_circuit(in.ansatz, in.theta, in.m, spec, st));
        worst = std::max(worst, std::abs(exact_probability(psi, n, 0) - 0.5));
    }
    return {worst < kC4Tol, "20 circuits (both orders), max |P0 - 1/2| = " + fmt(worst)};
}

// 5. Sampled variances against the closed forms.
Outcome variance_formulas(const Context &) {
    Rng rng(505);
    const std::size_t N = 500;
    const std::size_t R = 400;
    double lo = 1e9;
    double hi = 0;
    std::ostringstream per;
    for (int i = 0; i < 5; ++i) {
        const Instance in = draw(6, 1 + i % 3, 12, 5.0, rng);
        const std::size_t l = std::uniform_int_distribution<std::size_t>(0, in.theta.size() - 1)(rng);
        const auto spec = DerivativeSpec::first(l);
        const double g = exact_derivative_oracle(in.ansatz, in.theta, in.m, spec);

        QndmSettings st;
        st.lambda = lambda_rule(in.m);
        const QndmExperiment q(in.ansatz, in.theta, in.m, spec, st);
        const auto eq = empirical_mse([&](Rng &r) { return q.sample(N, r).value; }, R, g, 5000 + i, Method::QNDM, 1);
        QndmMseInputs qi;
        qi.shots = N;
        qi.lambda = st.lambda;
        qi.p0 = q.p0();
        qi.sigma_d2 = q.p0() * (1 - q.p0());
        const double fq = qndm_mse_formula(1, qi).variance;

        const DmExperiment d(in.ansatz, in.theta, in.m, spec);
        const auto ed = empirical_mse([&](Rng &r) { return d.sample(N, r).value; }, R, g, 6000 + i, Method::DM, 1);
        DmMseInputs di;
        di.shots = N;
        for (const auto &t : in.m.terms()) {
            di.coeffs.push_back(t.coeff);
        }
        di.sigma_s2 = d.exact_sigma2();
        const double fd = dm_mse_formula(1, di).variance;

        for (double r : {eq.variance / fq, ed.variance / fd}) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        per << " [" << fmt(eq.variance / fq) << ", " << fmt(ed.variance / fd) << "]";
    }
    return {lo >= 1 / kC5Factor && hi <= kC5Factor,
            "empirical/formula variance in [" + fmt(lo) + ", " + fmt(hi) + "] (need within x1.5); per instance [QNDM, DM]:" +
                per.str()};
}

// 6 and 9 share the measured-cost check.
bool measured_costs_match(int order, Rng &rng, std::string &detail) {
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 1 + i % 5;
        const std::size_t m = 1 + (i * 7) % 9;
        const std::size_t J = std::min<std::size_t>(1 + (i * 3) % 11, (std::size_t{1} << (2 * n)) - 1);
        const Instance in = draw(n, m, J, 5.0, rng);
        const std::size_t p = in.theta.size();
        const auto spec = order == 1 ? DerivativeSpec::first(i % p) : DerivativeSpec::second(i % p, (i + 1) % p);
        const std::uint64_t N = 100 + 37 * i;
        const std::uint64_t k = gate_count(in.ansatz);
        QndmSettings st;
        st.lambda = 0.1;
        const auto q = qndm_derivative(in.ansatz, in.theta, in.m, spec, st, N, rng);
        const auto d = dm_derivative(in.ansatz, in.theta, in.m, spec, N, rng);
        const auto fq = cost(Method::QNDM, order, N, J, k, n).formula_cost;
        const auto fdm = cost(Method::DM, order, N, J, k, n).formula_cost;
        if (q.measured_gate_cost != fq || d.measured_gate_cost != fdm) {
            detail = "config " + std::to_string(i) + ": measured " + std::to_string(q.measured_gate_cost) + "/" +
                     std::to_string(d.measured_gate_cost) + " vs formula " + std::to_string(fq) + "/" +
                     std::to_string(fdm);
            return false;
        }
    }
    detail = "10 configs measured == formula";
    return true;
}

// Ratio asymptotes from measured costs on circuits that sit in each regime.
bool asymptotes_hold(int order, std::string &detail) {
    Rng rng(606 + order);
    const std::uint64_t Nq = 200;
    const std::uint64_t Nd = 1300;
    double worst = 0;
    auto measured_ratio = [&](std::size_t n, std::size_t m, std::size_t J) {
        const Instance in = draw(n, m, J, 1.0, rng);
        const auto spec = order == 1 ? DerivativeSpec::first(0) : DerivativeSpec::second(0, 1);
        QndmSettings st;
        st.lambda = 0.1;
        const QndmExperiment q(in.ansatz, in.theta, in.m, spec, st);
        const DmExperiment d(in.ansatz, in.theta, in.m, spec);
        return static_cast<double>(d.execution_units_per_shot() * Nd) /
               static_cast<double>(q.execution_units_per_shot() * Nq);
    };
    // k >> nJ: (2J/3) Nd/Nq at order 1; the second-order analog is (4J/7) Nd/Nq.
    for (std::size_t J : {2u, 4u, 6u}) {
        const std::size_t n = 2;
        const std::size_t m = layers_for_gate_target(n, 50 * n * J);
        const double want = (order == 1 ? 2.0 / 3.0 : 4.0 / 7.0) * static_cast<double>(J) * Nd / Nq;
        worst = std::max(worst, std::abs(measured_ratio(n, m, J) / want - 1));
    }
    // nJ >> k: (k / 4n) Nd/Nq at both orders. The exact ratio is
    // ((k + n) / 4n) Nd/Nq in this limit, so k >> n is needed as well. J of
    // 50 k / n exceeds the 4^n - 1 strings of any desk-sized register, so this
    // regime uses the closed-form model, which the measured-cost check above
    // ties to the engine's counts.
    for (std::uint64_t k : {500u, 1000u, 2000u}) {
        const std::uint64_t n = 10;
        const std::uint64_t J = 50 * k / n;
        const double r = cost_ratio(cost(Method::DM, order, Nd, J, k, n), cost(Method::QNDM, order, Nq, J, k, n));
        worst = std::max(worst, std::abs(r / (static_cast<double>(k) / (4.0 * n) * Nd / Nq) - 1));
    }
    detail = "max relative deviation from asymptotes " + fmt(worst) + " (tol 5%)";
    return worst < kC6AsymptoteTol;
}

Outcome cost_model(const Context &) {
    Rng rng(606);
    std::string a;
    std::string b;
    const bool ok = measured_costs_match(1, rng, a) & asymptotes_hold(1, b);
    return {ok, a + "; " + b};
}

// 7. MSE vs J at equal shots.
Outcome mse_vs_j(const Context &ctx) {
    std::ostringstream out;
    bool ok = true;
    (void)ctx;
    for (std::size_t n : {6u, 10u}) {
        ExperimentConfig c = preset_config(n == 6 ? "ci" : "full", SweepKind::MseVsJ);
        c.n = n;
        c.L = 25;
        c.shots = 500;
        c.seed = 7;
        const auto res = run_sweep(c, SweepKind::MseVsJ);
        std::size_t wins = 0;
        out << "n=" << n << ":";
        for (const auto &row : res.rows) {
            wins += row.qndm.mse_emp < row.dm.mse_emp;
            out << " J=" << row.point.J << " QNDM " << fmt(row.qndm.mse_emp) << " vs DM " << fmt(row.dm.mse_emp) << ";";
        }
        const double frac = static_cast<double>(wins) / static_cast<double>(res.rows.size());
        out << " QNDM lower at " << wins << "/" << res.rows.size() << " points. ";
        ok = ok && frac >= kC7Fraction;
    }
    return {ok, out.str() + "(need >= 80% at each n)"};
}

// 8. Matched-shot ratio sweeps.
Outcome ratio_sweeps(const Context &ctx) {
    std::ostringstream out;
    bool ok = true;
    std::vector<std::pair<const char *, SweepKind>> runs{{"ci", SweepKind::RatioVsJ}, {"ci", SweepKind::RatioVsK}};
    if (ctx.full) {
        runs.push_back({"full", SweepKind::RatioVsJ});
        runs.push_back({"full", SweepKind::RatioVsK});
    }
    for (const auto &[preset, kind] : runs) {
        ExperimentConfig c = preset_config(preset, kind);
        c.seed = 8;
        const auto res = run_sweep(c, kind);
        std::map<double, std::pair<std::vector<double>, std::vector<double>>> lines;
        double max_ratio = 0;
        for (const auto &row : res.rows) {
            lines[row.fixed_value].first.push_back(row.sweep_value);
            lines[row.fixed_value].second.push_back(row.mu_ratio);
            max_ratio = std::max(max_ratio, row.mu_ratio);
        }
        out << preset << " " << to_string(kind) << ":";
        for (const auto &[fixed, xy] : lines) {
            const auto fit = linear_fit(xy.first, xy.second);
            out << " line " << res.rows.front().fixed_var << "=" << fixed << " slope " << fmt(fit.slope) << " R2 "
                << fmt(fit.r2) << ";";
            ok = ok && fit.r2 >= kC8MinR2 && fit.slope > 0;
        }
        out << " max ratio " << fmt(max_ratio) << ". ";
        ok = ok && max_ratio > kC8MinRatio;
    }
    return {ok, out.str()};
}

// 9. Second derivatives.
Outcome second_order(const Context &) {
    Rng rng(909);
    double worst = 0;
    double asym = 0;
    for (int i = 0; i < 10; ++i) {
        const Instance in = draw(2 + i % 3, 1 + i % 2, 2 + i % 4, 1.0, rng);
        const std::size_t p = in.theta.size();
        const std::size_t l = i % p;
        const std::size_t w = (i * 5 + 1) % p;
        QndmSettings st;
        st.lambda = kC9Lambda;
        const double fd = fd_second(in, l, w, kC9FdStep);
        Rng unused(0);
        const double dlw = dm_derivative(in.ansatz, in.theta, in.m, DerivativeSpec::second(l, w), 1, unused, Mode::Exact).value;
        const double dwl = dm_derivative(in.ansatz, in.theta, in.m, DerivativeSpec::second(w, l), 1, unused, Mode::Exact).value;
        const double qlw = QndmExperiment(in.ansatz, in.theta, in.m, DerivativeSpec::second(l, w), st).exact(1).value;
        const double qwl = QndmExperiment(in.ansatz, in.theta, in.m, DerivativeSpec::second(w, l), st).exact(1).value;
        for (double v : {dlw, dwl, qlw, qwl}) {
            worst = std::max(worst, std::abs(v - fd));
        }
        asym = std::max({asym, std::abs(dlw - dwl), std::abs(qlw - qwl)});
    }
    std::string costs;
    std::string asymptotes;
    Rng crng(919);
    const bool cost_ok = measured_costs_match(2, crng, costs) & asymptotes_hold(2, asymptotes);
    return {worst < kC9Tol && asym < kC9Tol && cost_ok,
            "10 Hessian entries, max |est - FD| = " + fmt(worst) + ", max |g_lw - g_wl| = " + fmt(asym) +
                " (tol 1e-4); " + costs + "; " + asymptotes};
}

// 10. Repeated CLI invocations give byte-identical CSV bodies.
std::string csv_body(const fs::path &p) {
    const std::string text = read_file(p.string());
    return text.substr(text.find('\n') + 1);
}

Outcome determinism(const Context &ctx) {
    if (ctx.cli.empty()) {
        return {false, "no --cli path given"};
    }
    const fs::path root = fs::temp_directory_path() / "qndm_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::string>> runs{
        {"derive --n 3 --J 5 --layers 2 --seed 11 --shots 300 --R 20", "derivative.csv"},
        {"hessian --n 2 --J 3 --layers 2 --dir 0 --dir2 3 --seed 12 --shots 300 --R 20", "derivative.csv"},
        {"mse-sweep --preset ci --n 3 --L 2 --R 10 --J 3,6 --seed 13", "mse_sweep.csv"},
        {"cost-sweep --preset ci --regime nJ-dominant --n 3 --L 2 --R 10 --J 3,6 --layers 2 --seed 14",
         "cost_sweep.csv"},
        {"ratio-sweep --preset ci --regime k-dominant --n 3 --L 2 --R 10 --J 2,4 --lines 20 --seed 15",
         "ratio_sweep.csv"},
    };
    std::size_t same = 0;
    std::string failed;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string bodies[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = root / (std::to_string(i) + "_" + std::to_string(rep));
            const std::string cmd = "\"" + ctx.cli + "\" " + runs[i].first + " --out \"" + out.string() + "\" > /dev/null";
            if (std::system(cmd.c_str()) != 0) {
                return {false, "command failed: " + cmd};
            }
            bodies[rep] = csv_body(out / runs[i].second);
        }
        if (bodies[0] == bodies[1] && !bodies[0].empty()) {
            ++same;
        } else {
            failed += " " + runs[i].first.substr(0, runs[i].first.find(' '));
        }
    }
    fs::remove_all(root);
    return {same == runs.size(), std::to_string(same) + "/" + std::to_string(runs.size()) +
                                     " commands byte-identical across two runs" + (failed.empty() ? "" : ";" + failed)};
}

struct Criterion {
    int id;
    const char *name;
    double max_seconds;  // 0: no runtime bound
    std::function<Outcome(const Context &)> run;
};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance criteria for the derivative estimators"};
    Context ctx;
    std::string only;
    std::string expect_fail;
    app.add_option("--cli", ctx.cli, "Path to the qndm_cli executable (criterion 10)");
    app.add_flag("--full", ctx.full, "Also run the full-preset (n = 10, L = 50) ratio sweeps");
    app.add_option("--only", only, "Comma-separated criterion ids to run");
    app.add_option("--expect-fail", expect_fail, "Comma-separated criterion ids whose failure is documented");
    CLI11_PARSE(app, argc, argv);

    std::set<std::size_t> selected;
    std::set<std::size_t> allowed;
    try {
        for (auto v : only.empty() ? std::vector<std::size_t>{} : parse_size_list(only)) {
            selected.insert(v);
        }
        for (auto v : expect_fail.empty() ? std::vector<std::size_t>{} : parse_size_list(expect_fail)) {
            allowed.insert(v);
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    const std::vector<Criterion> criteria{
        {1, "parameter-shift exactness", kC1MaxSeconds, parameter_shift_exactness},
        {2, "QNDM bias law", kC2MaxSeconds, qndm_bias_law},
        {3, "normalization calibration", kC3MaxSeconds, calibration},
        {4, "detector symmetry", 0, detector_symmetry},
        {5, "variance formulas", kC5MaxSeconds, variance_formulas},
        {6, "cost model", 0, cost_model},
        {7, "MSE vs J at equal shots", kC7MaxSeconds, mse_vs_j},
        {8, "matched-shot cost ratios", kC8MaxSeconds, ratio_sweeps},
        {9, "second order", 0, second_order},
        {10, "CLI determinism", 0, determinism},
    };

    int unexpected = 0;
    int failures = 0;
    for (const auto &c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(ctx);
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.max_seconds > 0 && secs > c.max_seconds) {
            o.pass = false;
            o.detail += " runtime over " + fmt(c.max_seconds) + " s";
        }
        const bool documented = !o.pass && allowed.count(c.id);
        std::printf("%s criterion %d (%s): %s [%.2f s]%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, documented ? " (documented failure)" : "");
        std::fflush(stdout);
        failures += !o.pass;
        unexpected += !o.pass && !documented;
    }
    std::printf("%d criteria failed, %d of them undocumented\n", failures, unexpected);
    return unexpected == 0 ? 0 : 1;
}

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


#include "qndm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "qndm/analysis.hpp"
#include "qndm/error.hpp"
#include "qndm/version.hpp"

namespace qndm {

const char *to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::MseVsJ:
            return "mse_vs_J";
        case SweepKind::CostVsK:
            return "cost_vs_k";
        case SweepKind::CostVsNJ:
            return "cost_vs_nJ";
        case SweepKind::RatioVsJ:
            return "ratio_vs_J";
        case SweepKind::RatioVsK:
            return "ratio_vs_k";
    }
    return "?";
}

SweepKind sweep_kind_from_string(std::string_view name) {
    for (auto k : {SweepKind::MseVsJ, SweepKind::CostVsK, SweepKind::CostVsNJ, SweepKind::RatioVsJ,
                   SweepKind::RatioVsK}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown sweep kind '" + std::string(name) + "'");
}

const char *to_string(SigmaMode m) { return m == SigmaMode::Pilot ? "pilot" : "uniform"; }
const char *to_string(MatchTarget m) { return m == MatchTarget::Formula ? "formula" : "empirical"; }

void ExperimentConfig::validate(SweepKind kind) const {
    require_config(n >= 1, "n must be >= 1");
    require_config(n + 1 <= kDeskMaxQubits, "n + 1 = " + std::to_string(n + 1) + " exceeds the desk-scale limit of " +
                                                std::to_string(kDeskMaxQubits) + " qubits");
    require_config(order == 1 || order == 2, "order must be 1 or 2");
    require_config(std::isfinite(s) && std::abs(std::sin(s)) > 1e-12, "s must have sin(s) != 0");
    require_config(shots >= 1, "shots must be >= 1");
    require_config(L >= 1, "L must be >= 1");
    require_config(R >= 2, "R must be >= 2");
    require_config(coeff_std > 0 && std::isfinite(coeff_std), "coeff_std must be > 0");
    require_config(!lambda || (*lambda > 0 && std::isfinite(*lambda)), "lambda must be > 0");
    require_config(c1 > 0 && c2 > 0, "c1 and c2 must be > 0");
    require_config(pilot_shots >= 1, "pilot_shots must be >= 1");
    const std::size_t max_terms = n >= 31 ? std::numeric_limits<std::size_t>::max() : (std::size_t{1} << (2 * n)) - 1;
    auto check_J = [&](const std::vector<std::size_t> &grid, const char *name) {
        require_config(!grid.empty(), std::string("empty sweep grid: ") + name);
        for (auto j : grid) {
            require_config(j >= 1 && j <= max_terms, std::string(name) + " entry " + std::to_string(j) +
                                                          " outside [1, 4^n - 1]");
        }
    };
    auto check_m = [&](const std::vector<std::size_t> &grid, const char *name) {
        require_config(!grid.empty(), std::string("empty sweep grid: ") + name);
        for (auto m : grid) {
            require_config(m >= 1, std::string(name) + " entries must be >= 1");
        }
    };
    switch (kind) {
        case SweepKind::MseVsJ:
            check_J(J_grid, "J grid");
            check_m(m_grid, "m grid");
            break;
        case SweepKind::CostVsK:
            check_J(J_grid, "J grid");
            require_config(J_grid.size() == 1, "cost_vs_k needs exactly one J (fixed nJ)");
            check_m(m_grid, "m grid");
            break;
        case SweepKind::CostVsNJ:
            check_J(J_grid, "J grid");
            check_m(m_grid, "m grid");
            require_config(m_grid.size() == 1, "cost_vs_nJ needs exactly one m (fixed k)");
            break;
        case SweepKind::RatioVsJ:
            check_J(J_grid, "J grid");
            check_m(lines, "m lines");
            break;
        case SweepKind::RatioVsK:
            check_m(m_grid, "m grid");
            check_J(lines, "J lines");
            break;
    }
}

ExperimentConfig preset_config(std::string_view preset, SweepKind kind, int order) {
    ExperimentConfig c;
    c.order = order;
    const bool full = preset == "full";
    require_config(full || preset == "ci", "unknown preset '" + std::string(preset) + "' (expected ci or full)");
    c.n = full ? 10 : 6;
    c.L = full ? (kind == SweepKind::MseVsJ ? 100 : 50) : 10;
    switch (kind) {
        case SweepKind::MseVsJ:
            c.J_grid = {6, 12, 24, 48};
            c.m_grid = {1, 2, 3, 4, 5};
            break;
        case SweepKind::CostVsK:
            // nJ = 240.
            c.J_grid = {full ? 24u : 40u};
            c.m_grid = full ? std::vector<std::size_t>{5, 26, 53, 105, 263, 526}
                            : std::vector<std::size_t>{10, 50, 100, 200, 500, 1100};
            break;
        case SweepKind::CostVsNJ:
            // k close to 500.
            c.m_grid = {full ? 27u : 46u};
            c.J_grid = full ? std::vector<std::size_t>{24, 48, 96, 192, 384}
                            : std::vector<std::size_t>{40, 80, 160, 320, 640};
            break;
        case SweepKind::RatioVsJ:
            // Every line keeps k >= 50 nJ over the whole J grid.
            c.J_grid = {2, 4, 6, 8, 10};
            c.lines = full ? std::vector<std::size_t>{264, 527, 1053} : std::vector<std::size_t>{273, 546, 1091};
            break;
        case SweepKind::RatioVsK:
            // Every line keeps nJ >= 50 k over the whole m grid.
            c.m_grid = {1, 2, 3, 4, 5};
            c.lines = {500, 1000};
            break;
    }
    return c;
}

std::uint64_t realization_seed(const ExperimentConfig &config, const SweepPoint &point, std::size_t index) {
    return mix_seed(config.seed, {static_cast<std::uint64_t>(config.order), point.J, point.m, index});
}

RealizationRecord run_realization(const ExperimentConfig &config, SweepKind kind, const SweepPoint &point,
                                  std::size_t index) {
    const std::uint64_t base = realization_seed(config, point, index);
    Rng inst(stream_seed(base, Stream::Instance));

    std::size_t m = point.m;
    if (m == 0) {
        require_config(!config.m_grid.empty(), "empty sweep grid: m grid");
        std::uniform_int_distribution<std::size_t> pick(0, config.m_grid.size() - 1);
        m = config.m_grid[pick(inst)];
    }
    const AnsatzInstance a = random_ansatz(config.n, m, inst);
    const Observable obs = random_observable(config.n, point.J, config.coeff_std, inst);
    std::uniform_int_distribution<std::size_t> pick_dir(0, a.theta.size() - 1);
    const std::size_t l = pick_dir(inst);
    const std::size_t w = config.order == 2 ? pick_dir(inst) : l;
    const DerivativeSpec spec = config.order == 1 ? DerivativeSpec::first(l, config.s)
                                                  : DerivativeSpec::second(l, w, config.s);

    RealizationRecord rec;
    rec.J = point.J;
    rec.m = m;
    rec.n = config.n;
    rec.k = gate_count(a.ansatz);
    rec.l = l;
    rec.w = w;
    rec.oracle = exact_derivative_oracle(a.ansatz, a.theta, obs, spec);

    QndmSettings settings;
    settings.lambda = config.lambda ? *config.lambda : lambda_rule(obs);
    settings.s = config.s;
    settings.c1 = config.c1;
    settings.c2 = config.c2;
    rec.lambda = settings.lambda;

    // QNDM at fixed N_QNDM.
    const QndmExperiment qndm(a.ansatz, a.theta, obs, spec, settings);
    {
        Rng rng(stream_seed(base, Stream::QndmShots));
        rec.qndm.value = qndm.sample(config.shots, rng).value;
        rec.qndm.shots = config.shots;
        rec.qndm.mse_emp = empirical_mse([&](Rng &r) { return qndm.sample(config.shots, r).value; }, config.R,
                                         rec.oracle, stream_seed(base, Stream::QndmRepeats), Method::QNDM, config.order)
                               .mse;
        QndmMseInputs in;
        in.shots = config.shots;
        in.s = config.s;
        in.lambda = settings.lambda;
        in.p0 = qndm.p0();
        in.sigma_d2 = qndm.p0() * (1 - qndm.p0());
        in.d2G = qndm_d2G(a.ansatz, a.theta, obs, spec, settings.lambda);
        in.c1 = config.c1;
        in.c2 = config.c2;
        try {
            rec.qndm.mse_formula = qndm_mse_formula(config.order, in).mse;
        } catch (const SingularError &) {
            rec.qndm.mse_formula = std::numeric_limits<double>::infinity();
        }
    }

    // DM, shot count matched to the QNDM MSE unless this is an equal-shot sweep.
    const DmExperiment dm(a.ansatz, a.theta, obs, spec);
    std::vector<double> coeffs;
    for (const auto &t : obs.terms()) {
        coeffs.push_back(t.coeff);
    }
    std::vector<double> sigma2;
    {
        Rng rng(stream_seed(base, Stream::DmPilot));
        sigma2 = dm.pilot_sigma2(config.pilot_shots, rng);
    }
    if (config.sigma_mode == SigmaMode::Uniform) {
        double mean = 0;
        for (double v : sigma2) {
            mean += v;
        }
        std::fill(sigma2.begin(), sigma2.end(), mean / static_cast<double>(sigma2.size()));
    }
    std::uint64_t n_dm = config.shots;
    if (kind != SweepKind::MseVsJ) {
        double target = config.match_target == MatchTarget::Formula ? rec.qndm.mse_formula : rec.qndm.mse_emp;
        if (!(target > 0) || !std::isfinite(target)) {
            target = config.match_target == MatchTarget::Formula ? rec.qndm.mse_emp : rec.qndm.mse_formula;
        }
        // Every pilot outcome identical for every string: no shot noise to match.
        double weighted = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            weighted += coeffs[i] * coeffs[i] * sigma2[i];
        }
        n_dm = weighted > 0 ? match_shots_dm(target, coeffs, sigma2, config.s, config.order) : 1;
        rec.matched = true;
    }
    {
        Rng rng(stream_seed(base, Stream::DmShots));
        rec.dm.value = dm.sample(n_dm, rng).value;
        rec.dm.shots = n_dm;
        rec.dm.mse_emp = empirical_mse([&](Rng &r) { return dm.sample(n_dm, r).value; }, config.R, rec.oracle,
                                       stream_seed(base, Stream::DmRepeats), Method::DM, config.order)
                             .mse;
        DmMseInputs in;
        in.shots = n_dm;
        in.s = config.s;
        in.coeffs = coeffs;
        in.sigma_s2 = sigma2;
        rec.dm.mse_formula = dm_mse_formula(config.order, in).mse;
    }

    const CostReport cq = cost(Method::QNDM, config.order, rec.qndm.shots, rec.J, rec.k, rec.n);
    const CostReport cd = cost(Method::DM, config.order, rec.dm.shots, rec.J, rec.k, rec.n);
    rec.qndm.cost_formula = cq.formula_cost;
    rec.dm.cost_formula = cd.formula_cost;
    rec.qndm.cost_measured = qndm.execution_units_per_shot() * rec.qndm.shots;
    rec.dm.cost_measured = dm.execution_units_per_shot() * rec.dm.shots;
    rec.ratio = cost_ratio(cd, cq);
    return rec;
}

namespace {

std::vector<SweepRow> plan_rows(const ExperimentConfig &c, SweepKind kind) {
    std::vector<SweepRow> rows;
    const double n = static_cast<double>(c.n);
    auto k_of = [&](std::size_t m) { return static_cast<double>(gate_count(c.n, m)); };
    auto add = [&](std::string sv, double sval, std::string fv, double fval, SweepPoint p) {
        SweepRow r;
        r.sweep_var = std::move(sv);
        r.sweep_value = sval;
        r.fixed_var = std::move(fv);
        r.fixed_value = fval;
        r.point = p;
        rows.push_back(std::move(r));
    };
    switch (kind) {
        case SweepKind::MseVsJ:
            for (auto J : c.J_grid) {
                add("J", static_cast<double>(J), "n", n, {J, 0});
            }
            break;
        case SweepKind::CostVsK:
            for (auto m : c.m_grid) {
                add("k", k_of(m), "nJ", n * static_cast<double>(c.J_grid[0]), {c.J_grid[0], m});
            }
            break;
        case SweepKind::CostVsNJ:
            for (auto J : c.J_grid) {
                add("nJ", n * static_cast<double>(J), "k", k_of(c.m_grid[0]), {J, c.m_grid[0]});
            }
            break;
        case SweepKind::RatioVsJ:
            for (auto m : c.lines) {
                for (auto J : c.J_grid) {
                    add("J", static_cast<double>(J), "k", k_of(m), {J, m});
                }
            }
            break;
        case SweepKind::RatioVsK:
            for (auto J : c.lines) {
                for (auto m : c.m_grid) {
                    add("k", k_of(m), "nJ", n * static_cast<double>(J), {J, m});
                }
            }
            break;
    }
    return rows;
}

void accumulate(MethodMeans &acc, const MethodRecord &r) {
    acc.g += r.value;
    acc.mse_emp += r.mse_emp;
    acc.mse_formula += r.mse_formula;
    acc.cost_formula += static_cast<double>(r.cost_formula);
    acc.cost_measured += static_cast<double>(r.cost_measured);
    acc.shots += static_cast<double>(r.shots);
}

void scale(MethodMeans &acc, double inv) {
    acc.g *= inv;
    acc.mse_emp *= inv;
    acc.mse_formula *= inv;
    acc.cost_formula *= inv;
    acc.cost_measured *= inv;
    acc.shots *= inv;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig &config, SweepKind kind) {
    config.validate(kind);
    SweepResult result;
    result.kind = kind;
    result.config = config;
    result.rows = plan_rows(config, kind);
    for (auto &row : result.rows) {
        row.records.resize(config.L);
    }

    const std::size_t jobs = result.rows.size() * config.L;
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            auto &row = result.rows[j / config.L];
            try {
                row.records[j % config.L] = run_realization(config, kind, row.point, j % config.L);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    // Reduction in realization-index order, independent of completion order.
    const double inv = 1.0 / static_cast<double>(config.L);
    for (auto &row : result.rows) {
        for (const auto &rec : row.records) {
            accumulate(row.dm, rec.dm);
            accumulate(row.qndm, rec.qndm);
            row.mu_ratio += rec.ratio;
            row.mu_oracle += rec.oracle;
        }
        scale(row.dm, inv);
        scale(row.qndm, inv);
        row.mu_ratio *= inv;
        row.mu_oracle *= inv;
    }
    return result;
}

std::string mse_csv(const SweepResult &result) {
    const auto &c = result.config;
    std::string out = "J,method,mu_g,mu_mse_emp,mu_mse_formula,shots,L,R,seed\n";
    for (const auto &row : result.rows) {
        for (const auto *pair : {&row.dm, &row.qndm}) {
            const bool is_dm = pair == &row.dm;
            out += std::to_string(row.point.J) + ',' + (is_dm ? "dm" : "qndm") + ',' + format_double(pair->g) + ',' +
                   format_double(pair->mse_emp) + ',' + format_double(pair->mse_formula) + ',' +
                   format_double(pair->shots) + ',' + std::to_string(c.L) + ',' + std::to_string(c.R) + ',' +
                   std::to_string(c.seed) + '\n';
        }
    }
    return out;
}

std::string cost_csv(const SweepResult &result) {
    const auto &c = result.config;
    std::string out = "sweep_var,sweep_value,method,mu_cost_formula,mu_cost_measured,mu_shots,L,seed\n";
    for (const auto &row : result.rows) {
        for (const auto *pair : {&row.dm, &row.qndm}) {
            const bool is_dm = pair == &row.dm;
            out += row.sweep_var + ',' + format_double(row.sweep_value) + ',' + (is_dm ? "dm" : "qndm") + ',' +
                   format_double(pair->cost_formula) + ',' + format_double(pair->cost_measured) + ',' +
                   format_double(pair->shots) + ',' + std::to_string(c.L) + ',' + std::to_string(c.seed) + '\n';
        }
    }
    return out;
}

std::string ratio_csv(const SweepResult &result) {
    const auto &c = result.config;
    std::string out = "sweep_var,sweep_value,fixed_var,fixed_value,mu_ratio,L,seed\n";
    for (const auto &row : result.rows) {
        out += row.sweep_var + ',' + format_double(row.sweep_value) + ',' + row.fixed_var + ',' +
               format_double(row.fixed_value) + ',' + format_double(row.mu_ratio) + ',' + std::to_string(c.L) + ',' +
               std::to_string(c.seed) + '\n';
    }
    return out;
}

KeyValues config_runcard(const ExperimentConfig &c) {
    KeyValues kv;
    kv.emplace_back("seed", std::to_string(c.seed));
    kv.emplace_back("n", std::to_string(c.n));
    kv.emplace_back("order", std::to_string(c.order));
    if (!c.J_grid.empty()) {
        kv.emplace_back("J", format_size_list(c.J_grid));
    }
    if (!c.m_grid.empty()) {
        kv.emplace_back("layers", format_size_list(c.m_grid));
        std::vector<std::size_t> k;
        for (auto m : c.m_grid) {
            k.push_back(gate_count(c.n, m));
        }
        kv.emplace_back("k", format_size_list(k));
    }
    if (!c.lines.empty()) {
        kv.emplace_back("lines", format_size_list(c.lines));
    }
    kv.emplace_back("s", format_double(c.s));
    kv.emplace_back("shots", std::to_string(c.shots));
    kv.emplace_back("L", std::to_string(c.L));
    kv.emplace_back("R", std::to_string(c.R));
    kv.emplace_back("coeff_std", format_double(c.coeff_std));
    kv.emplace_back("lambda_rule", c.lambda ? "fixed" : "inv_sqrt_abs_sum");
    if (c.lambda) {
        kv.emplace_back("lambda", format_double(*c.lambda));
    }
    kv.emplace_back("c1", format_double(c.c1));
    kv.emplace_back("c2", format_double(c.c2));
    kv.emplace_back("sigma_s_mode", to_string(c.sigma_mode));
    kv.emplace_back("pilot_shots", std::to_string(c.pilot_shots));
    kv.emplace_back("match_target", to_string(c.match_target));
    kv.emplace_back("version", kVersion);
    return kv;
}

void write_sweep_outputs(const SweepResult &result, const std::string &out_dir, const KeyValues &extra) {
    const std::string dir = out_dir.empty() ? std::string(".") : out_dir;
    if (result.kind == SweepKind::MseVsJ) {
        write_file_atomic(dir + "/mse_sweep.csv", mse_csv(result));
    } else {
        write_file_atomic(dir + "/cost_sweep.csv", cost_csv(result));
        write_file_atomic(dir + "/ratio_sweep.csv", ratio_csv(result));
    }
    KeyValues kv = extra;
    kv.emplace_back("sweep", to_string(result.kind));
    kv.emplace_back("timestamp", utc_timestamp());
    for (auto &e : config_runcard(result.config)) {
        kv.push_back(std::move(e));
    }
    write_file_atomic(dir + "/runcard.txt", format_key_values(kv));
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), "linear fit needs matching x and y");
    require_config(x.size() >= 2, "linear fit needs at least two points");
    const double nn = static_cast<double>(x.size());
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= nn;
    my /= nn;
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require_config(sxx > 0, "linear fit needs two distinct x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

}  // namespace qndm

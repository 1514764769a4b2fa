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


// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qndm/qndm.h"

namespace {

/// Carries a library status out of the command handlers.
struct Failure : std::runtime_error {
    qndm_status status;
    Failure(qndm_status s, const std::string &what) : std::runtime_error(what), status(s) {}
};

void check(qndm_status s) {
    if (s != QNDM_OK) {
        throw Failure(s, qndm_last_error());
    }
}

void fail_config(const std::string &what) { throw Failure(QNDM_ERR_CONFIG, what); }

struct ObsDeleter {
    void operator()(qndm_observable *p) const { qndm_observable_free(p); }
};
struct AnsatzDeleter {
    void operator()(qndm_ansatz *p) const { qndm_ansatz_free(p); }
};
struct KvDeleter {
    void operator()(qndm_key_values *p) const { qndm_kv_free(p); }
};
using ObsPtr = std::unique_ptr<qndm_observable, ObsDeleter>;
using AnsatzPtr = std::unique_ptr<qndm_ansatz, AnsatzDeleter>;
using KvPtr = std::unique_ptr<qndm_key_values, KvDeleter>;

std::string take_string(char *s) {
    std::string out(s ? s : "");
    qndm_string_free(s);
    return out;
}

std::string fmt(double x) {
    if (std::isnan(x)) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <typename T>
std::string join(const std::vector<T> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ',';
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt(v[i]);
        } else {
            out += std::to_string(v[i]);
        }
    }
    return out;
}

struct Options {
    std::optional<std::size_t> n;
    std::vector<std::size_t> J;
    std::vector<std::size_t> layers;
    std::vector<std::size_t> lines;
    std::string observable;
    std::string observable_file;
    std::string axes;
    std::vector<double> theta;
    std::size_t dir = 0;
    std::optional<std::size_t> dir2;
    double s = std::numbers::pi / 2;
    std::optional<std::uint64_t> shots;
    std::optional<double> lambda;
    std::string lambda_rule = "inv_sqrt_abs_sum";
    double c1 = 4.0;
    double c2 = 8.0;
    std::string method = "both";
    int order = 1;
    std::optional<std::size_t> L;
    std::optional<std::size_t> R;
    std::uint64_t seed = 0;
    std::string preset = "ci";
    std::string regime = "k-dominant";
    std::string out = ".";
    std::optional<double> coeff_std;
    std::string sigma_s_mode = "pilot";
    std::optional<std::uint64_t> pilot_shots;
    std::string match_target = "empirical";
    std::size_t threads = 0;
    std::size_t index = 0;
    bool exact = false;
    std::string config;
};

std::string out_path(const Options &o, const std::string &name) {
    return (o.out.empty() ? std::string(".") : o.out) + "/" + name;
}

void write_text(const std::string &path, const std::string &body) {
    check(qndm_write_file_atomic(path.c_str(), body.data(), body.size()));
}

double resolve_lambda(const Options &o) {
    if (o.lambda) {
        if (!(*o.lambda > 0)) {
            fail_config("--lambda must be > 0");
        }
        return *o.lambda;
    }
    if (o.lambda_rule == "fixed") {
        fail_config("--lambda-rule fixed needs --lambda");
    }
    return 0.0;
}

std::string lambda_rule_name(const Options &o) { return o.lambda ? "fixed" : o.lambda_rule; }

// ---- derive / hessian

int run_derive(const Options &o, bool hessian) {
    const int order = hessian ? 2 : o.order;
    const std::uint64_t shots = o.shots.value_or(500);
    const std::size_t repeats = o.R.value_or(100);
    const std::size_t m = o.layers.empty() ? 1 : o.layers.front();
    if (o.layers.size() > 1) {
        fail_config("--layers takes a single value for derive/hessian");
    }

    ObsPtr obs;
    qndm_observable *raw = nullptr;
    if (!o.observable.empty() && !o.observable_file.empty()) {
        fail_config("--observable and --observable-file are mutually exclusive");
    }
    if (!o.observable.empty()) {
        check(qndm_observable_parse(o.observable.c_str(), &raw));
    } else if (!o.observable_file.empty()) {
        check(qndm_observable_load(o.observable_file.c_str(), &raw));
    } else {
        if (!o.n) {
            fail_config("--n is required without --observable");
        }
        const std::size_t J = o.J.empty() ? 1 : o.J.front();
        check(qndm_observable_random(*o.n, J, o.coeff_std.value_or(5.0), o.seed, &raw));
    }
    obs.reset(raw);
    const std::size_t n = qndm_observable_num_qubits(obs.get());
    if (o.n && *o.n != n) {
        fail_config("--n " + std::to_string(*o.n) + " does not match the observable's " + std::to_string(n) +
                    " qubits");
    }

    qndm_ansatz *ar = nullptr;
    check(qndm_ansatz_create(n, m, o.axes.empty() ? nullptr : o.axes.c_str(), &ar));
    AnsatzPtr ansatz(ar);
    std::vector<double> theta = o.theta;
    if (theta.empty()) {
        theta.resize(n * m);
        check(qndm_random_angles(theta.size(), o.seed, theta.data()));
    }
    if (theta.size() != n * m) {
        fail_config("--theta needs n * layers = " + std::to_string(n * m) + " values, got " +
                    std::to_string(theta.size()));
    }

    std::vector<qndm_method> methods;
    if (o.method == "dm" || o.method == "both") {
        methods.push_back(QNDM_METHOD_DM);
    }
    if (o.method == "qndm" || o.method == "both") {
        methods.push_back(QNDM_METHOD_QNDM);
    }

    qndm_derivative_request req;
    qndm_derivative_request_init(&req);
    req.order = order;
    req.dir = o.dir;
    req.dir2 = o.dir2.value_or(o.dir);
    req.s = o.s;
    req.shots = shots;
    req.lambda = resolve_lambda(o);
    req.c1 = o.c1;
    req.c2 = o.c2;
    req.seed = o.seed;
    req.exact = o.exact ? 1 : 0;
    req.repeats = repeats;

    std::string csv = "method,order,dir,dir2,value,oracle,shots,lambda,mse_emp,mse_formula,cost_formula,cost_measured,seed\n";
    for (auto method : methods) {
        req.method = method;
        qndm_derivative_result r;
        check(qndm_derivative(ansatz.get(), theta.data(), theta.size(), obs.get(), &req, &r));
        csv += std::string(method == QNDM_METHOD_DM ? "dm" : "qndm") + ',' + std::to_string(order) + ',' +
               std::to_string(req.dir) + ',' + std::to_string(order == 2 ? req.dir2 : req.dir) + ',' + fmt(r.value) +
               ',' + fmt(r.oracle) + ',' + std::to_string(r.shots) + ',' + fmt(r.lambda) + ',' + fmt(r.mse_emp) + ',' +
               fmt(r.mse_formula) + ',' + std::to_string(r.cost_formula) + ',' + std::to_string(r.cost_measured) +
               ',' + std::to_string(o.seed) + '\n';
    }
    write_text(out_path(o, "derivative.csv"), csv);

    char *obs_text = nullptr;
    check(qndm_observable_to_text(obs.get(), &obs_text));
    char *axes_text = nullptr;
    check(qndm_ansatz_axes(ansatz.get(), &axes_text));
    KvPtr kv(qndm_kv_new());
    auto add = [&](const char *k, const std::string &v) { check(qndm_kv_add(kv.get(), k, v.c_str())); };
    add("command", hessian ? "hessian" : "derive");
    add("seed", std::to_string(o.seed));
    add("n", std::to_string(n));
    add("J", std::to_string(qndm_observable_num_terms(obs.get())));
    add("layers", std::to_string(m));
    add("k", std::to_string(qndm_ansatz_gate_count(ansatz.get())));
    add("axes", take_string(axes_text));
    add("observable", take_string(obs_text));
    add("theta", join(theta));
    add("dir", std::to_string(req.dir));
    add("dir2", std::to_string(req.dir2));
    add("order", std::to_string(order));
    add("method", o.method);
    add("s", fmt(o.s));
    add("shots", std::to_string(shots));
    add("R", std::to_string(repeats));
    add("lambda_rule", lambda_rule_name(o));
    if (o.lambda) {
        add("lambda", fmt(*o.lambda));
    }
    add("c1", fmt(o.c1));
    add("c2", fmt(o.c2));
    if (o.exact) {
        add("exact", "true");
    }
    check(qndm_kv_write_runcard(kv.get(), out_path(o, "runcard.txt").c_str()));
    return 0;
}

// ---- calibrate

int run_calibrate(const Options &o) {
    double c1 = 0;
    double c2 = 0;
    double r1 = 0;
    double r2 = 0;
    char *report = nullptr;
    check(qndm_calibrate(&c1, &c2, &r1, &r2, &report));
    write_text(out_path(o, "calibration.txt"), take_string(report));
    KvPtr kv(qndm_kv_new());
    auto add = [&](const char *k, const std::string &v) { check(qndm_kv_add(kv.get(), k, v.c_str())); };
    add("command", "calibrate");
    add("c1", fmt(c1));
    add("c2", fmt(c2));
    add("residual1", fmt(r1));
    add("residual2", fmt(r2));
    check(qndm_kv_write_runcard(kv.get(), out_path(o, "runcard.txt").c_str()));
    std::cout << "c1 = " << fmt(c1) << "\nc2 = " << fmt(c2) << '\n';
    return 0;
}

// ---- sweeps

void copy_grid(const std::vector<std::size_t> &src, std::size_t *dst, std::size_t *len, const char *flag) {
    if (src.size() > QNDM_MAX_GRID) {
        fail_config(std::string(flag) + " lists more than " + std::to_string(QNDM_MAX_GRID) + " values");
    }
    std::copy(src.begin(), src.end(), dst);
    *len = src.size();
}

qndm_sweep_config sweep_config(const Options &o, qndm_sweep_kind kind) {
    qndm_sweep_config c;
    check(qndm_sweep_preset(o.preset.c_str(), kind, o.order, &c));
    if (o.n) {
        c.n = *o.n;
    }
    if (!o.J.empty()) {
        copy_grid(o.J, c.J_grid, &c.J_len, "--J");
    }
    if (!o.layers.empty()) {
        copy_grid(o.layers, c.m_grid, &c.m_len, "--layers");
    }
    if (!o.lines.empty()) {
        copy_grid(o.lines, c.lines, &c.lines_len, "--lines");
    }
    if (o.L) {
        c.L = *o.L;
    }
    if (o.R) {
        c.R = *o.R;
    }
    if (o.shots) {
        c.shots = *o.shots;
    }
    if (o.coeff_std) {
        c.coeff_std = *o.coeff_std;
    }
    if (o.pilot_shots) {
        c.pilot_shots = *o.pilot_shots;
    }
    c.s = o.s;
    c.lambda = resolve_lambda(o);
    c.c1 = o.c1;
    c.c2 = o.c2;
    c.seed = o.seed;
    c.order = o.order;
    c.sigma_uniform = o.sigma_s_mode == "uniform";
    c.match_formula = o.match_target == "formula";
    c.threads = o.threads;
    return c;
}

int run_sweep(const Options &o, const std::string &command) {
    qndm_sweep_kind kind = QNDM_SWEEP_MSE_VS_J;
    const bool k_dom = o.regime == "k-dominant";
    if (command == "cost-sweep") {
        kind = k_dom ? QNDM_SWEEP_COST_VS_K : QNDM_SWEEP_COST_VS_NJ;
    } else if (command == "ratio-sweep") {
        kind = k_dom ? QNDM_SWEEP_RATIO_VS_J : QNDM_SWEEP_RATIO_VS_K;
    }
    const qndm_sweep_config c = sweep_config(o, kind);
    KvPtr kv(qndm_kv_new());
    check(qndm_kv_add(kv.get(), "command", command.c_str()));
    check(qndm_kv_add(kv.get(), "preset", o.preset.c_str()));
    if (command != "mse-sweep") {
        check(qndm_kv_add(kv.get(), "regime", o.regime.c_str()));
    }
    check(qndm_run_sweep(&c, kind, o.out.c_str(), kv.get()));
    return 0;
}

int run_realize(const Options &o) {
    qndm_sweep_config c = sweep_config(o, QNDM_SWEEP_COST_VS_K);
    if (o.J.size() != 1 || o.layers.size() != 1) {
        fail_config("realize needs exactly one --J and one --layers value");
    }
    qndm_realization r;
    check(qndm_run_realization(&c, o.J.front(), o.layers.front(), o.index, &r));
    std::string csv =
        "J,m,k,n,l,w,lambda,oracle,method,value,mse_emp,mse_formula,shots,cost_formula,cost_measured,ratio,seed,index\n";
    for (int i = 0; i < 2; ++i) {
        csv += std::to_string(r.J) + ',' + std::to_string(r.m) + ',' + std::to_string(r.k) + ',' +
               std::to_string(r.n) + ',' + std::to_string(r.l) + ',' + std::to_string(r.w) + ',' + fmt(r.lambda) +
               ',' + fmt(r.oracle) + ',' + (i == QNDM_METHOD_DM ? "dm" : "qndm") + ',' + fmt(r.value[i]) + ',' +
               fmt(r.mse_emp[i]) + ',' + fmt(r.mse_formula[i]) + ',' + std::to_string(r.shots[i]) + ',' +
               std::to_string(r.cost_formula[i]) + ',' + std::to_string(r.cost_measured[i]) + ',' + fmt(r.ratio) +
               ',' + std::to_string(o.seed) + ',' + std::to_string(o.index) + '\n';
    }
    write_text(out_path(o, "realization.csv"), csv);
    KvPtr kv(qndm_kv_new());
    auto add = [&](const char *k, const std::string &v) { check(qndm_kv_add(kv.get(), k, v.c_str())); };
    add("command", "realize");
    add("preset", o.preset);
    add("seed", std::to_string(o.seed));
    add("n", std::to_string(c.n));
    add("J", std::to_string(r.J));
    add("layers", std::to_string(r.m));
    add("k", std::to_string(r.k));
    add("index", std::to_string(o.index));
    add("order", std::to_string(c.order));
    add("s", fmt(c.s));
    add("shots", std::to_string(c.shots));
    add("R", std::to_string(c.R));
    add("coeff_std", fmt(c.coeff_std));
    add("lambda_rule", lambda_rule_name(o));
    if (o.lambda) {
        add("lambda", fmt(*o.lambda));
    }
    add("c1", fmt(c.c1));
    add("c2", fmt(c.c2));
    add("sigma_s_mode", o.sigma_s_mode);
    add("pilot_shots", std::to_string(c.pilot_shots));
    add("match_target", o.match_target);
    check(qndm_kv_write_runcard(kv.get(), out_path(o, "runcard.txt").c_str()));
    return 0;
}

// ---- argument wiring

void add_options(CLI::App &app, Options &o) {
    app.add_option("--n", o.n, "System qubit count");
    app.add_option("--J", o.J, "Pauli string count(s), comma-separated for sweeps")->delimiter(',');
    app.add_option("--layers", o.layers, "Layer count(s) m, comma-separated for sweeps")->delimiter(',');
    app.add_option("--lines", o.lines, "Fixed values per ratio-sweep line (m or J)")->delimiter(',');
    app.add_option("--observable", o.observable, "Observable text, terms '<coeff> <letters>' separated by ';'");
    app.add_option("--observable-file", o.observable_file, "Observable file, one term per line");
    app.add_option("--axes", o.axes, "Rotation axes, m*n letters from XYZ, layer-major (default all X)");
    app.add_option("--theta", o.theta, "Parameters, comma-separated (default random from --seed)")->delimiter(',');
    app.add_option("--dir", o.dir, "Derivative direction l");
    app.add_option("--dir2", o.dir2, "Second direction w (order 2, default l)");
    app.add_option("--s", o.s, "Shift s (default pi/2)");
    app.add_option("--shots", o.shots, "Shots N (default 500)");
    app.add_option("--lambda", o.lambda, "Coupling constant; overrides --lambda-rule");
    app.add_option("--lambda-rule,--lambda_rule", o.lambda_rule, "inv_sqrt_abs_sum or fixed")
        ->check(CLI::IsMember({"inv_sqrt_abs_sum", "fixed"}));
    app.add_option("--c1", o.c1, "First-order normalization (default 4)");
    app.add_option("--c2", o.c2, "Second-order normalization (default 8)");
    app.add_option("--method", o.method, "dm, qndm or both")->check(CLI::IsMember({"dm", "qndm", "both"}));
    app.add_option("--order", o.order, "Derivative order 1 or 2")->check(CLI::IsMember({1, 2}));
    app.add_option("--L", o.L, "Realizations per sweep point");
    app.add_option("--R", o.R, "Repeats per empirical MSE");
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--preset", o.preset, "ci or full")->check(CLI::IsMember({"ci", "full"}));
    app.add_option("--regime", o.regime, "k-dominant or nJ-dominant")
        ->check(CLI::IsMember({"k-dominant", "nJ-dominant"}));
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--coeff-std,--coeff_std", o.coeff_std, "Std of random coefficients (default 5)");
    app.add_option("--sigma-s-mode,--sigma_s_mode", o.sigma_s_mode, "pilot or uniform")
        ->check(CLI::IsMember({"pilot", "uniform"}));
    app.add_option("--pilot-shots,--pilot_shots", o.pilot_shots, "Pilot shots per DM string (default 100)");
    app.add_option("--match-target,--match_target", o.match_target, "empirical or formula QNDM MSE")
        ->check(CLI::IsMember({"empirical", "formula"}));
    app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    app.add_option("--index", o.index, "Realization index (realize)");
    app.add_flag("--exact", o.exact, "Exact probabilities instead of sampled shots");
    app.add_option("--config", o.config, "key = value file (a runcard); command-line flags win");
}

/// Converts runcard entries into `--key=value` tokens for every key that names
/// a flag not already given on the command line. Unknown keys are skipped.
std::vector<std::string> config_tokens(CLI::App &app, const std::string &path) {
    qndm_key_values *raw = nullptr;
    check(qndm_kv_load(path.c_str(), &raw));
    KvPtr kv(raw);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < qndm_kv_size(kv.get()); ++i) {
        const std::string key = qndm_kv_key(kv.get(), i);
        const std::string value = qndm_kv_value(kv.get(), i);
        if (key == "config") {
            continue;
        }
        CLI::Option *opt = app.get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) {
            continue;
        }
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1") {
                tokens.push_back("--" + key);
            }
            continue;
        }
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

int exit_code(qndm_status s) { return s == QNDM_ERR_INTERNAL ? 1 : 2; }

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Derivative estimators for variational circuits: direct measurement vs detector phase", "qndm_cli"};
    app.fallthrough();
    app.require_subcommand(1, 1);
    Options o;
    add_options(app, o);
    const std::vector<std::string> commands = {"derive",     "hessian",     "calibrate", "mse-sweep",
                                               "cost-sweep", "ratio-sweep", "realize"};
    const std::vector<std::string> help = {"One derivative estimate (DM and/or QNDM)",
                                           "One Hessian entry (order 2)",
                                           "Fit the QNDM normalization constants",
                                           "MSE vs J at equal shots",
                                           "Cost vs k (k-dominant) or vs nJ (nJ-dominant)",
                                           "Cost ratio vs J (k-dominant) or vs k (nJ-dominant)",
                                           "One harness realization"};
    for (std::size_t i = 0; i < commands.size(); ++i) {
        app.add_subcommand(commands[i], help[i]);
    }

    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) {
        args.emplace_back(argv[i]);
    }
    try {
        std::vector<std::string> first = args;
        app.parse(first);
        if (!o.config.empty()) {
            std::vector<std::string> extra = config_tokens(app, o.config);
            std::vector<std::string> all;
            for (const auto &t : extra) {
                all.push_back(t);
            }
            std::reverse(all.begin(), all.end());
            all.insert(all.end(), args.begin(), args.end());
            app.clear();
            o = Options{};
            app.parse(all);
        }
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Failure &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.status);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "derive" || command == "hessian") {
            return run_derive(o, command == "hessian");
        }
        if (command == "calibrate") {
            return run_calibrate(o);
        }
        if (command == "realize") {
            return run_realize(o);
        }
        return run_sweep(o, command);
    } catch (const Failure &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.status);
    }
}

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


#include "qndm/qndm.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "qndm/analysis.hpp"
#include "qndm/error.hpp"
#include "qndm/harness.hpp"
#include "qndm/io.hpp"
#include "qndm/version.hpp"

struct qndm_observable {
    qndm::Observable obs;
};

struct qndm_ansatz {
    qndm::LayeredAnsatz ansatz;
};

struct qndm_key_values {
    qndm::KeyValues kv;
};

namespace {

thread_local std::string g_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
qndm_status guarded(F &&body) {
    g_last_error.clear();
    try {
        body();
        return QNDM_OK;
    } catch (const qndm::ConfigError &e) {
        g_last_error = e.what();
        return QNDM_ERR_CONFIG;
    } catch (const qndm::ContractError &e) {
        g_last_error = e.what();
        return QNDM_ERR_CONTRACT;
    } catch (const qndm::CalibrationError &e) {
        g_last_error = e.what();
        return QNDM_ERR_CALIBRATION;
    } catch (const qndm::SingularError &e) {
        g_last_error = e.what();
        return QNDM_ERR_SINGULAR;
    } catch (const qndm::IoError &e) {
        g_last_error = e.what();
        return QNDM_ERR_IO;
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return QNDM_ERR_INTERNAL;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return QNDM_ERR_INTERNAL;
    }
}

qndm_status null_arg(const char *name) {
    g_last_error = std::string("argument '") + name + "' is NULL";
    return QNDM_ERR_NULL;
}

#define QNDM_REQUIRE_ARG(p)     \
    do {                        \
        if ((p) == nullptr) {   \
            return null_arg(#p); \
        }                       \
    } while (0)

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<std::size_t> grid(const std::size_t *values, std::size_t len) {
    qndm::require_config(len <= QNDM_MAX_GRID, "grid longer than QNDM_MAX_GRID");
    return {values, values + len};
}

void copy_grid(const std::vector<std::size_t> &src, std::size_t *dst, std::size_t *len) {
    qndm::require_config(src.size() <= QNDM_MAX_GRID, "grid longer than QNDM_MAX_GRID");
    std::copy(src.begin(), src.end(), dst);
    *len = src.size();
}

qndm::ExperimentConfig to_config(const qndm_sweep_config &c) {
    qndm::ExperimentConfig e;
    e.n = c.n;
    e.order = c.order;
    e.s = c.s;
    e.shots = c.shots;
    e.L = c.L;
    e.R = c.R;
    e.coeff_std = c.coeff_std;
    if (c.lambda > 0) {
        e.lambda = c.lambda;
    }
    e.c1 = c.c1;
    e.c2 = c.c2;
    e.seed = c.seed;
    e.sigma_mode = c.sigma_uniform ? qndm::SigmaMode::Uniform : qndm::SigmaMode::Pilot;
    e.pilot_shots = c.pilot_shots;
    e.match_target = c.match_formula ? qndm::MatchTarget::Formula : qndm::MatchTarget::Empirical;
    e.threads = c.threads;
    e.J_grid = grid(c.J_grid, c.J_len);
    e.m_grid = grid(c.m_grid, c.m_len);
    e.lines = grid(c.lines, c.lines_len);
    return e;
}

qndm::SweepKind to_kind(qndm_sweep_kind k) {
    switch (k) {
        case QNDM_SWEEP_MSE_VS_J:
            return qndm::SweepKind::MseVsJ;
        case QNDM_SWEEP_COST_VS_K:
            return qndm::SweepKind::CostVsK;
        case QNDM_SWEEP_COST_VS_NJ:
            return qndm::SweepKind::CostVsNJ;
        case QNDM_SWEEP_RATIO_VS_J:
            return qndm::SweepKind::RatioVsJ;
        case QNDM_SWEEP_RATIO_VS_K:
            return qndm::SweepKind::RatioVsK;
    }
    throw qndm::ConfigError("unknown sweep kind " + std::to_string(static_cast<int>(k)));
}

}  // namespace

extern "C" {

const char *qndm_version(void) { return qndm::kVersion; }

const char *qndm_last_error(void) { return g_last_error.c_str(); }

void qndm_string_free(char *s) { std::free(s); }

// ---- observables

qndm_status qndm_observable_parse(const char *text, qndm_observable **out) {
    QNDM_REQUIRE_ARG(text);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] { *out = new qndm_observable{qndm::Observable::parse(text)}; });
}

qndm_status qndm_observable_load(const char *path, qndm_observable **out) {
    QNDM_REQUIRE_ARG(path);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] { *out = new qndm_observable{qndm::Observable::parse(qndm::read_file(path))}; });
}

qndm_status qndm_observable_random(size_t n, size_t J, double coeff_std, uint64_t seed, qndm_observable **out) {
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        qndm::Rng rng(qndm::stream_seed(seed, qndm::Stream::Instance));
        *out = new qndm_observable{qndm::random_observable(n, J, coeff_std, rng)};
    });
}

void qndm_observable_free(qndm_observable *obs) { delete obs; }

size_t qndm_observable_num_qubits(const qndm_observable *obs) { return obs ? obs->obs.num_qubits() : 0; }

size_t qndm_observable_num_terms(const qndm_observable *obs) { return obs ? obs->obs.num_terms() : 0; }

qndm_status qndm_observable_to_text(const qndm_observable *obs, char **out) {
    QNDM_REQUIRE_ARG(obs);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        std::string text = obs->obs.to_text();
        std::string joined;
        std::size_t start = 0;
        while (start < text.size()) {
            const auto nl = text.find('\n', start);
            if (!joined.empty()) {
                joined += "; ";
            }
            joined += text.substr(start, nl - start);
            start = nl + 1;
        }
        *out = dup_string(joined);
    });
}

qndm_status qndm_observable_lambda(const qndm_observable *obs, double *out) {
    QNDM_REQUIRE_ARG(obs);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] { *out = qndm::lambda_rule(obs->obs); });
}

// ---- ansatz

qndm_status qndm_ansatz_create(size_t n, size_t m, const char *axes, qndm_ansatz **out) {
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        if (axes == nullptr) {
            *out = new qndm_ansatz{qndm::LayeredAnsatz::uniform(n, m, qndm::Pauli::X)};
            return;
        }
        const std::size_t len = std::strlen(axes);
        qndm::require_config(len == n * m, "axes string needs exactly m * n = " + std::to_string(n * m) +
                                               " letters, got " + std::to_string(len));
        std::vector<qndm::Pauli> letters;
        for (std::size_t i = 0; i < len; ++i) {
            letters.push_back(qndm::pauli_from_char(axes[i]));
        }
        *out = new qndm_ansatz{qndm::LayeredAnsatz(n, m, std::move(letters))};
    });
}

qndm_status qndm_ansatz_random(size_t n, size_t m, uint64_t seed, double *theta_out, qndm_ansatz **out) {
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        qndm::Rng rng(qndm::stream_seed(seed, qndm::Stream::Instance));
        auto inst = qndm::random_ansatz(n, m, rng);
        if (theta_out) {
            std::copy(inst.theta.begin(), inst.theta.end(), theta_out);
        }
        *out = new qndm_ansatz{std::move(inst.ansatz)};
    });
}

void qndm_ansatz_free(qndm_ansatz *ansatz) { delete ansatz; }

qndm_status qndm_random_angles(size_t count, uint64_t seed, double *out) {
    if (count > 0) {
        QNDM_REQUIRE_ARG(out);
    }
    return guarded([&] {
        qndm::Rng rng(qndm::stream_seed(seed, qndm::Stream::Instance));
        std::uniform_real_distribution<double> pick(0.0, 2 * std::numbers::pi);
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = pick(rng);
        }
    });
}

size_t qndm_ansatz_num_qubits(const qndm_ansatz *ansatz) { return ansatz ? ansatz->ansatz.num_qubits() : 0; }

size_t qndm_ansatz_num_params(const qndm_ansatz *ansatz) { return ansatz ? ansatz->ansatz.num_params() : 0; }

uint64_t qndm_ansatz_gate_count(const qndm_ansatz *ansatz) { return ansatz ? qndm::gate_count(ansatz->ansatz) : 0; }

qndm_status qndm_ansatz_axes(const qndm_ansatz *ansatz, char **out) {
    QNDM_REQUIRE_ARG(ansatz);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        std::string s;
        for (auto a : ansatz->ansatz.axes()) {
            s += qndm::to_char(a);
        }
        *out = dup_string(s);
    });
}

// ---- derivatives

void qndm_derivative_request_init(qndm_derivative_request *req) {
    if (!req) {
        return;
    }
    *req = {};
    req->method = QNDM_METHOD_QNDM;
    req->order = 1;
    req->s = std::numbers::pi / 2;
    req->shots = 500;
    req->lambda = 0;
    req->c1 = qndm::kDefaultC1;
    req->c2 = qndm::kDefaultC2;
}

qndm_status qndm_derivative(const qndm_ansatz *ansatz, const double *theta, size_t num_theta,
                            const qndm_observable *obs, const qndm_derivative_request *req,
                            qndm_derivative_result *out) {
    QNDM_REQUIRE_ARG(ansatz);
    QNDM_REQUIRE_ARG(theta);
    QNDM_REQUIRE_ARG(obs);
    QNDM_REQUIRE_ARG(req);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        using namespace qndm;
        const auto &a = ansatz->ansatz;
        const auto &m = obs->obs;
        require_config(num_theta == a.num_params(), "theta needs " + std::to_string(a.num_params()) +
                                                        " values, got " + std::to_string(num_theta));
        require_config(a.num_qubits() == m.num_qubits(), "observable acts on " + std::to_string(m.num_qubits()) +
                                                             " qubits but the ansatz on " +
                                                             std::to_string(a.num_qubits()));
        require_config(req->order == 1 || req->order == 2, "order must be 1 or 2");
        require_config(req->shots >= 1, "shots must be >= 1");
        require_config(req->dir < a.num_params(), "dir " + std::to_string(req->dir) + " out of range [0, " +
                                                      std::to_string(a.num_params()) + ")");
        require_config(req->order == 1 || req->dir2 < a.num_params(),
                       "dir2 " + std::to_string(req->dir2) + " out of range [0, " + std::to_string(a.num_params()) +
                           ")");
        const std::span<const double> th(theta, num_theta);
        const DerivativeSpec spec = req->order == 1 ? DerivativeSpec::first(req->dir, req->s)
                                                    : DerivativeSpec::second(req->dir, req->dir2, req->s);
        qndm_derivative_result r{};
        r.oracle = exact_derivative_oracle(a, th, m, spec);
        r.shots = req->shots;
        r.mse_emp = kNaN;
        r.mse_formula = kNaN;
        r.lambda = kNaN;
        r.p0 = kNaN;
        const Mode mode = req->exact ? Mode::Exact : Mode::Sampled;
        Rng rng(stream_seed(req->seed, req->method == QNDM_METHOD_DM ? Stream::DmShots : Stream::QndmShots));
        if (req->method == QNDM_METHOD_DM) {
            const DmExperiment dm(a, th, m, spec);
            const auto est = mode == Mode::Exact ? dm.exact(req->shots) : dm.sample(req->shots, rng);
            r.value = est.value;
            r.cost_measured = est.measured_gate_cost;
            r.raw_gate_count = est.raw_gate_count;
            DmMseInputs in;
            in.shots = req->shots;
            in.s = req->s;
            for (const auto &t : m.terms()) {
                in.coeffs.push_back(t.coeff);
            }
            in.sigma_s2 = dm.exact_sigma2();
            r.mse_formula = dm_mse_formula(req->order, in).mse;
            if (req->repeats > 0) {
                r.mse_emp = empirical_mse([&](Rng &g) { return dm.sample(req->shots, g).value; }, req->repeats,
                                          r.oracle, stream_seed(req->seed, Stream::DmRepeats), Method::DM,
                                          req->order)
                                .mse;
            }
            r.cost_formula = cost(Method::DM, req->order, req->shots, m.num_terms(), gate_count(a), a.num_qubits())
                                 .formula_cost;
        } else {
            QndmSettings st;
            st.lambda = req->lambda > 0 ? req->lambda : lambda_rule(m);
            st.s = req->s;
            st.c1 = req->c1;
            st.c2 = req->c2;
            const QndmExperiment q(a, th, m, spec, st);
            const auto est = mode == Mode::Exact ? q.exact(req->shots) : q.sample(req->shots, rng);
            r.value = est.value;
            r.lambda = st.lambda;
            r.p0 = q.p0();
            r.cost_measured = est.measured_gate_cost;
            r.raw_gate_count = est.raw_gate_count;
            QndmMseInputs in;
            in.shots = req->shots;
            in.s = req->s;
            in.lambda = st.lambda;
            in.p0 = q.p0();
            in.sigma_d2 = q.p0() * (1 - q.p0());
            in.d2G = qndm_d2G(a, th, m, spec, st.lambda);
            in.c1 = req->c1;
            in.c2 = req->c2;
            try {
                r.mse_formula = qndm_mse_formula(req->order, in).mse;
            } catch (const SingularError &) {
                r.mse_formula = kNaN;
            }
            if (req->repeats > 0) {
                r.mse_emp = empirical_mse([&](Rng &g) { return q.sample(req->shots, g).value; }, req->repeats,
                                          r.oracle, stream_seed(req->seed, Stream::QndmRepeats), Method::QNDM,
                                          req->order)
                                .mse;
            }
            r.cost_formula = cost(Method::QNDM, req->order, req->shots, m.num_terms(), gate_count(a), a.num_qubits())
                                 .formula_cost;
        }
        *out = r;
    });
}

qndm_status qndm_exact_derivative(const qndm_ansatz *ansatz, const double *theta, size_t num_theta,
                                  const qndm_observable *obs, int order, size_t dir, size_t dir2, double s,
                                  double *out) {
    QNDM_REQUIRE_ARG(ansatz);
    QNDM_REQUIRE_ARG(theta);
    QNDM_REQUIRE_ARG(obs);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        const qndm::DerivativeSpec spec{order, dir, order == 2 ? dir2 : dir, s};
        *out = qndm::exact_derivative_oracle(ansatz->ansatz, std::span<const double>(theta, num_theta), obs->obs,
                                             spec);
    });
}

qndm_status qndm_calibrate(double *c1, double *c2, double *residual1, double *residual2, char **report) {
    return guarded([&] {
        const auto r = qndm::calibrate_normalization();
        if (c1) {
            *c1 = r.c1;
        }
        if (c2) {
            *c2 = r.c2;
        }
        if (residual1) {
            *residual1 = r.residual1;
        }
        if (residual2) {
            *residual2 = r.residual2;
        }
        if (report) {
            *report = dup_string(r.report);
        }
    });
}

// ---- sweeps

qndm_status qndm_sweep_preset(const char *preset, qndm_sweep_kind kind, int order, qndm_sweep_config *out) {
    QNDM_REQUIRE_ARG(preset);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        const auto e = qndm::preset_config(preset, to_kind(kind), order);
        qndm_sweep_config c{};
        c.n = e.n;
        c.order = e.order;
        c.s = e.s;
        c.shots = e.shots;
        c.L = e.L;
        c.R = e.R;
        c.coeff_std = e.coeff_std;
        c.lambda = e.lambda ? *e.lambda : 0.0;
        c.c1 = e.c1;
        c.c2 = e.c2;
        c.seed = e.seed;
        c.sigma_uniform = e.sigma_mode == qndm::SigmaMode::Uniform;
        c.pilot_shots = e.pilot_shots;
        c.match_formula = e.match_target == qndm::MatchTarget::Formula;
        c.threads = e.threads;
        copy_grid(e.J_grid, c.J_grid, &c.J_len);
        copy_grid(e.m_grid, c.m_grid, &c.m_len);
        copy_grid(e.lines, c.lines, &c.lines_len);
        *out = c;
    });
}

qndm_status qndm_run_sweep(const qndm_sweep_config *config, qndm_sweep_kind kind, const char *out_dir,
                           const qndm_key_values *extra) {
    QNDM_REQUIRE_ARG(config);
    QNDM_REQUIRE_ARG(out_dir);
    return guarded([&] {
        const auto result = qndm::run_sweep(to_config(*config), to_kind(kind));
        qndm::write_sweep_outputs(result, out_dir, extra ? extra->kv : qndm::KeyValues{});
    });
}

qndm_status qndm_run_realization(const qndm_sweep_config *config, size_t J, size_t m, size_t index,
                                 qndm_realization *out) {
    QNDM_REQUIRE_ARG(config);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] {
        qndm::ExperimentConfig c = to_config(*config);
        c.J_grid = {J};
        c.m_grid = {m};
        c.validate(qndm::SweepKind::CostVsK);
        const auto rec = qndm::run_realization(c, qndm::SweepKind::CostVsK, {J, m}, index);
        qndm_realization r{};
        r.J = rec.J;
        r.m = rec.m;
        r.k = rec.k;
        r.n = rec.n;
        r.l = rec.l;
        r.w = rec.w;
        r.lambda = rec.lambda;
        r.oracle = rec.oracle;
        const qndm::MethodRecord *per[2] = {&rec.dm, &rec.qndm};
        for (int i = 0; i < 2; ++i) {
            r.value[i] = per[i]->value;
            r.mse_emp[i] = per[i]->mse_emp;
            r.mse_formula[i] = per[i]->mse_formula;
            r.shots[i] = per[i]->shots;
            r.cost_formula[i] = per[i]->cost_formula;
            r.cost_measured[i] = per[i]->cost_measured;
        }
        r.ratio = rec.ratio;
        *out = r;
    });
}

// ---- key = value files

qndm_key_values *qndm_kv_new(void) { return new (std::nothrow) qndm_key_values{}; }

qndm_status qndm_kv_parse(const char *text, qndm_key_values **out) {
    QNDM_REQUIRE_ARG(text);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] { *out = new qndm_key_values{qndm::parse_key_values(text)}; });
}

qndm_status qndm_kv_load(const char *path, qndm_key_values **out) {
    QNDM_REQUIRE_ARG(path);
    QNDM_REQUIRE_ARG(out);
    return guarded([&] { *out = new qndm_key_values{qndm::parse_key_values(qndm::read_file(path))}; });
}

void qndm_kv_free(qndm_key_values *kv) { delete kv; }

qndm_status qndm_kv_add(qndm_key_values *kv, const char *key, const char *value) {
    QNDM_REQUIRE_ARG(kv);
    QNDM_REQUIRE_ARG(key);
    QNDM_REQUIRE_ARG(value);
    return guarded([&] {
        qndm::require_config(*key != '\0', "empty runcard key");
        kv->kv.emplace_back(key, value);
    });
}

size_t qndm_kv_size(const qndm_key_values *kv) { return kv ? kv->kv.size() : 0; }

const char *qndm_kv_key(const qndm_key_values *kv, size_t i) {
    return kv && i < kv->kv.size() ? kv->kv[i].first.c_str() : nullptr;
}

const char *qndm_kv_value(const qndm_key_values *kv, size_t i) {
    return kv && i < kv->kv.size() ? kv->kv[i].second.c_str() : nullptr;
}

qndm_status qndm_kv_write_runcard(const qndm_key_values *kv, const char *path) {
    QNDM_REQUIRE_ARG(kv);
    QNDM_REQUIRE_ARG(path);
    return guarded([&] {
        qndm::KeyValues all = kv->kv;
        all.emplace_back("timestamp", qndm::utc_timestamp());
        all.emplace_back("version", qndm_version());
        qndm::write_file_atomic(path, qndm::format_key_values(all));
    });
}

qndm_status qndm_write_file_atomic(const char *path, const char *data, size_t len) {
    QNDM_REQUIRE_ARG(path);
    if (len > 0) {
        QNDM_REQUIRE_ARG(data);
    }
    return guarded([&] { qndm::write_file_atomic(path, std::string_view(data ? data : "", len)); });
}

}  // extern "C"

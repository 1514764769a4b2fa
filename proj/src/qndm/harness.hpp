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


#ifndef QNDM_HARNESS_HPP
#define QNDM_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qndm/estimators.hpp"
#include "qndm/io.hpp"

namespace qndm {

/// MseVsJ: equal shots for both methods, m drawn per realization from m_grid.
/// CostVsK: one J, m over m_grid (fixed nJ).
/// CostVsNJ: one m, J over J_grid (fixed k).
/// RatioVsJ: one line per m in `lines`, J over J_grid (k >> nJ).
/// RatioVsK: one line per J in `lines`, m over m_grid (nJ >> k).
/// The derivative order is taken from the config.
enum class SweepKind { MseVsJ, CostVsK, CostVsNJ, RatioVsJ, RatioVsK };

const char *to_string(SweepKind kind);
SweepKind sweep_kind_from_string(std::string_view name);

/// Per-string single-shot variance used by DM shot matching: per-string pilot
/// estimates, or their mean applied to every string.
enum class SigmaMode { Pilot, Uniform };
/// Which QNDM MSE the DM shot count is matched to.
enum class MatchTarget { Formula, Empirical };

const char *to_string(SigmaMode m);
const char *to_string(MatchTarget m);

/// Largest system-plus-detector register a realization may allocate.
inline constexpr std::size_t kDeskMaxQubits = 12;

struct ExperimentConfig {
    std::size_t n = 10;
    int order = 1;
    double s = std::numbers::pi / 2;
    std::uint64_t shots = 500;  // N_QNDM, and N_DM for equal-shot sweeps
    std::size_t L = 100;
    std::size_t R = 100;
    double coeff_std = 5.0;
    std::optional<double> lambda;  // overrides the lambda rule when set
    double c1 = kDefaultC1;
    double c2 = kDefaultC2;
    std::uint64_t seed = 0;
    SigmaMode sigma_mode = SigmaMode::Pilot;
    std::uint64_t pilot_shots = 100;
    MatchTarget match_target = MatchTarget::Empirical;
    std::vector<std::size_t> J_grid;
    std::vector<std::size_t> m_grid;
    std::vector<std::size_t> lines;
    std::size_t threads = 0;  // 0: hardware concurrency

    /// Throws ConfigError naming the offending field.
    void validate(SweepKind kind) const;
};

/// "ci" (n = 6, L = 10) or "full" (n = 10, L = 100 for MSE sweeps, 50
/// otherwise). Throws ConfigError on an unknown preset.
ExperimentConfig preset_config(std::string_view preset, SweepKind kind, int order = 1);

/// m == 0 means "draw m uniformly from the config's m_grid".
struct SweepPoint {
    std::size_t J = 1;
    std::size_t m = 0;
};

struct MethodRecord {
    double value = 0;
    double mse_emp = 0;
    double mse_formula = 0;
    std::uint64_t shots = 0;
    std::uint64_t cost_formula = 0;
    std::uint64_t cost_measured = 0;
};

struct RealizationRecord {
    std::size_t J = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t l = 0;
    std::size_t w = 0;
    double lambda = 0;
    double oracle = 0;
    MethodRecord dm;
    MethodRecord qndm;
    double ratio = 0;  // formula cost ratio C_DM / C_QNDM
    bool matched = false;
};

/// Seed of realization `index` at `point`.
std::uint64_t realization_seed(const ExperimentConfig &config, const SweepPoint &point, std::size_t index);

/// One random draw of (ansatz, theta, M, directions) and both protocols on it.
/// DM shots are matched to the QNDM MSE for every kind except MseVsJ.
RealizationRecord run_realization(const ExperimentConfig &config, SweepKind kind, const SweepPoint &point,
                                  std::size_t index);

struct MethodMeans {
    double g = 0;
    double mse_emp = 0;
    double mse_formula = 0;
    double cost_formula = 0;
    double cost_measured = 0;
    double shots = 0;
};

struct SweepRow {
    std::string sweep_var;
    double sweep_value = 0;
    std::string fixed_var;
    double fixed_value = 0;
    SweepPoint point;
    MethodMeans dm;
    MethodMeans qndm;
    double mu_ratio = 0;
    double mu_oracle = 0;
    std::vector<RealizationRecord> records;
};

struct SweepResult {
    SweepKind kind = SweepKind::MseVsJ;
    ExperimentConfig config;
    std::vector<SweepRow> rows;
};

/// L realizations per grid point, run in parallel and reduced in index order.
SweepResult run_sweep(const ExperimentConfig &config, SweepKind kind);

std::string mse_csv(const SweepResult &result);
std::string cost_csv(const SweepResult &result);
std::string ratio_csv(const SweepResult &result);

/// Runcard entries describing `config` (no timestamp).
KeyValues config_runcard(const ExperimentConfig &config);

/// Writes the kind's CSVs plus runcard.txt (`extra` entries first, then the
/// timestamp and config entries) into `out_dir`.
void write_sweep_outputs(const SweepResult &result, const std::string &out_dir, const KeyValues &extra);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

/// Ordinary least squares y = a x + b. Needs at least two distinct x values.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace qndm

#endif

// SPDX-License-Identifier: Apache-2.0
//
// rplink: link-level simulator for pattern-reconfigurable antenna arrays
// under directional jamming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>
#include <map>
#include <utility>

#include "rplink/link_opt.hpp"
#include "rplink/run_config.hpp"

namespace rplink
{

/// One end-to-end trial: true/estimated directions, angle errors, uplink
/// and downlink SE, the selected patterns, and failure flags. Angle
/// errors are max-of-coordinate absolute errors against nearest-integer
/// true angles.
struct TrialRecord
{
    std::uint64_t seed = 0;
    std::vector<AngleDeg> true_controller; // per configured path (rx)
    std::vector<double> est_controller_el; // padded with nan
    std::vector<double> est_controller_az;
    AngleDeg true_jammer;
    double est_jammer_el = arma::datum::nan;
    double est_jammer_az = arma::datum::nan;
    double xi_c = arma::datum::nan;
    double xi_j = arma::datum::nan;
    double se_up = arma::datum::nan;
    double se_dn = arma::datum::nan;
    int pattern_up = -1;
    int pattern_dn = -1;
    int iterations = 0;
    std::string flags = "ok";
    std::vector<double> objective_trace; // not serialized, used by checks
};

struct MetricSummary
{
    long count = 0;
    double mean = arma::datum::nan;
    double variance = arma::datum::nan;
    std::vector<std::pair<double, double>> cdf; // (knot, fraction <= knot)
};

struct SummaryReport
{
    long trials = 0;
    std::map<std::string, MetricSummary> metrics;
};

/// Immutable per-run state shared by all trials: the true bank, the
/// sensing/design matrix actually stored on the UAV (raw C or the
/// codec-reconstructed C_L), its column-normalized form, and the grid
/// steering matrix.
struct TrialContext
{
    RunConfig cfg;
    PatternBank bank;
    arma::mat sensing;      // what the estimator and optimizer use
    arma::mat sensing_norm;
    arma::cx_mat grid_steering;
    double downlink_budget_w = 0.0;
    double downlink_noise_var = 0.0;
};

TrialContext make_context(const RunConfig &cfg);

TrialRecord run_trial(const TrialContext &ctx, std::uint64_t seed);

/// Runs trials with seeds base_seed .. base_seed + trials - 1, in
/// parallel, with deterministic ordered emission.
std::vector<TrialRecord> run_trials(const TrialContext &ctx);

SummaryReport summarize(const std::vector<TrialRecord> &records);

void write_trials_csv(std::ostream &out, const std::vector<TrialRecord> &records,
                      int n_paths);
void write_summary(std::ostream &out, const SummaryReport &report);

/// Reads xi/SE metric columns back from a trials CSV (for `report`).
std::vector<TrialRecord> read_trials_csv(std::istream &in);

/// Full run: executes the Monte Carlo, writes <prefix>.csv and
/// <prefix>_summary.csv under out_dir, returns the summary.
SummaryReport run_montecarlo(const RunConfig &cfg, const std::string &out_dir);

} // namespace rplink

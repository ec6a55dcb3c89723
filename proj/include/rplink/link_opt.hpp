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

#include "rplink/channel.hpp"
#include "rplink/estimation.hpp"

namespace rplink
{

struct UplinkDesign
{
    int pattern_index = 0;
    arma::cx_vec combiner; // unit norm
    std::vector<double> objective_trace;
    int iterations = 0;
};

struct DownlinkDesign
{
    int pattern_index = 0;
    arma::vec powers; // water-filling allocation per eigenmode
    double se = 0.0;  // bits/s/Hz
};

struct SEReport
{
    double se_up = 0.0;
    double se_dn = 0.0;
    double sinr_up = 0.0;
};

struct RayleighResult
{
    arma::cx_vec b; // unit norm
    double lambda = 0.0;
};

/// Signal and interference quadratic forms at pattern n:
/// A = sum_l alpha_hat^2[l] C^2[n, zeta_l] a_l a_l^H,
/// B = C^2[n, i_J] a_J a_J^H. Both Hermitian PSD.
std::pair<arma::cx_mat, arma::cx_mat>
build_quadratic_forms(const ControllerEstimate &est, const JammerEstimate &jam,
                      const arma::mat &C, int n, const UpaShape &uav_shape);

/// Dominant generalized eigenpair of (A, B + eps I) via diagonal loading,
/// Cholesky whitening and a Hermitian eigensolve.
RayleighResult rayleigh_max(const arma::cx_mat &A, const arma::cx_mat &B,
                            double eps = 1e-8);

/// Alternates exhaustive pattern selection (combiner fixed) with the
/// generalized Rayleigh combiner update (pattern fixed) until the loaded
/// signal-to-interference objective stops increasing. The recorded
/// objective uses the loaded denominator b^H (B + eps I) b so the trace is
/// non-decreasing by construction.
UplinkDesign uplink_alternating_opt(const ControllerEstimate &est, const JammerEstimate &jam,
                                    const arma::mat &C, const UpaShape &uav_shape,
                                    const arma::cx_vec &init_combiner,
                                    double load_eps = 1e-8, double conv_eps = 1e-8,
                                    int max_iterations = 20);

/// Exhaustive search maximizing sum_l alpha_hat^2 C^2[n, zeta_l] /
/// C^2[n, i_J]; zero denominators rank as infinite with the larger
/// numerator winning, lowest index on ties.
int downlink_pattern_select(const ControllerEstimate &est, const JammerEstimate &jam,
                            const arma::mat &C);

/// Allocation p_i = max(mu - noise_var / lambda_i, 0) with the water level
/// chosen so the powers sum to the budget (exact active-set solve).
arma::vec water_filling(const arma::vec &eigenvalues, double noise_var,
                        double power_budget);

arma::cx_vec uniform_combiner(int n_u);

/// Uplink SE against the true channel with matched single-stream
/// beamforming through the fixed combiner. The controller transmit power
/// is already folded into the channel amplitudes.
SEReport evaluate_uplink_se(const ChannelSet &ch, const UplinkDesign &design);

DownlinkDesign downlink_design(const ChannelSet &ch, int pattern_index,
                               double power_budget, double noise_var);

SEReport evaluate_downlink_se(const ChannelSet &ch, int pattern_index,
                              double power_budget, double noise_var);

} // namespace rplink

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

#include <cstdint>
#include <vector>

#include "rplink/pattern_bank.hpp"

namespace rplink
{

enum class PathKind
{
    LoS,
    NLoS
};

/// One propagation path: arrival/departure directions, linear amplitude
/// gain (transmit power already folded in for controller paths) and a
/// random phase in [0, 1) turns.
struct PathSpec
{
    PathKind kind = PathKind::LoS;
    AngleDeg rx_angle;
    AngleDeg tx_angle; // unused for jammer paths
    double alpha = 1.0;
    double epsilon = 0.0;
};

struct ScenarioConfig
{
    double d_los_m = 200.0;
    double d_nlos_leg1_m = 200.0;
    double d_nlos_leg2_m = 100.0;
    double s_eff_m2 = 10.0;
    double f_c_hz = 2.44e9;
    double angle_range_deg = 70.0; // uniform span around boresight, both axes
    std::vector<PathKind> controller_paths{PathKind::LoS, PathKind::NLoS};
    std::vector<PathKind> jammer_paths{PathKind::LoS};
    double p_j_dbm = 50.0;
    double p_c_dbm = 27.0;
    double noise_psd_dbm_hz = -174.0;
    double rx_bandwidth_hz = 10e6;
    UpaShape uav_shape{2, 2};
    UpaShape controller_shape{2, 1};
};

/// One scenario realization. H_C is the single-antenna pilot channel
/// (N_U x N_p), H_C_full the full uplink channel (N_U x N_C per pattern),
/// h_J the jammer channel (N_U x N_p). Controller amplitudes carry
/// sqrt(P_C) so pilots are unit-amplitude; the jammer symbol variance is
/// sigma_J_sq = P_J.
struct ChannelSet
{
    arma::cx_mat H_C;
    arma::cx_cube H_C_full;
    arma::cx_mat h_J;
    std::vector<PathSpec> controller_paths;
    std::vector<PathSpec> jammer_paths;
    double sigma_U_sq = 0.0;
    double sigma_J_sq = 0.0;

    /// Reciprocal downlink channel (N_C x N_U) at the given pattern.
    arma::cx_mat downlink_slice(int n_p) const { return H_C_full.slice(n_p).st(); }
};

double dbm_to_watt(double dbm);

/// One-way large-scale amplitude: lambda / (4 pi d).
double oneway_gain(double distance_m, double f_c_hz);

/// Two-hop reflected amplitude: sqrt(S_eff lambda^2) / sqrt((4 pi)^3 d1^2 d2^2).
double twoway_gain(double d1_m, double d2_m, double s_eff_m2, double f_c_hz);

ChannelSet draw_scenario(const ScenarioConfig &cfg, const PatternBank &bank,
                         std::uint64_t seed);

/// Writes a scenario realization to a plain-text diagnostic file (path
/// table, sigmas, full channel entries) for regression comparisons.
void dump_channelset(const ChannelSet &ch, const std::string &path);

} // namespace rplink

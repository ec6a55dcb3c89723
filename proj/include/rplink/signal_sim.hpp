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
#include <span>

#include "rplink/channel.hpp"

namespace rplink
{

/// Frequency-hopping schedule bookkeeping. Snapshots per pattern dwell
/// come out of the timing quantities: n_s_bar = t_u * b_p samples per
/// dwell, n_s = n_s_bar * n_h / n_p samples per pattern overall.
struct HopSchedule
{
    double t_h_s = 1e-3;
    double t_i_s = 12e-3;
    double b_h_hz = 1e6;
    double b_i_hz = 20e6;
    double b_p_hz = 10e6;
    double t_u_s = 1e-4;
    int n_h = 121;
    int n_p = 121;

    long n_s_bar() const;
    long n_s() const; // throws unless n_s_bar * n_h divides by n_p
};

struct HopCarrier
{
    double freq_hz = 0.0;
    double phase = 0.0;
    double t_begin_s = 0.0;
    double t_end_s = 0.0;
};

/// Carrier descriptor of hop n_h: frequency, initial phase and the time
/// window [n_h * t_h, (n_h + 1) * t_h).
HopCarrier hop_carrier(int n_h, const HopSchedule &schedule,
                       std::span<const double> hop_frequencies,
                       std::span<const double> phases);

/// Received baseband snapshots at the UAV, one block per pattern.
struct ReceivedTensor
{
    arma::cx_cube samples; // N_U x N_s x N_p
    HopSchedule schedule;
};

/// Y[rx, s, p] = H_C[rx, p] + h_J[rx, p] x_J[s, p] + w, with x_J and w
/// i.i.d. circular complex Gaussian of variance sigma_J_sq / sigma_U_sq.
ReceivedTensor simulate_uplink_rx(const ChannelSet &ch, const HopSchedule &schedule,
                                  long n_s, std::uint64_t seed);

} // namespace rplink

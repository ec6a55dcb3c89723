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

#include "rplink/signal_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "rplink/rng.hpp"

namespace rplink
{

long HopSchedule::n_s_bar() const
{
    if (t_u_s <= 0.0 || b_p_hz <= 0.0 || t_h_s <= 0.0 || t_i_s <= 0.0 ||
        b_h_hz <= 0.0 || b_i_hz <= 0.0)
        throw std::invalid_argument("HopSchedule: durations and bandwidths must be positive");
    return std::lround(t_u_s * b_p_hz);
}

long HopSchedule::n_s() const
{
    long bar = n_s_bar();
    if (n_h < 1 || n_p < 1)
        throw std::invalid_argument("HopSchedule: counts must be positive");
    long total = bar * n_h;
    if (total % n_p != 0)
        throw std::invalid_argument("HopSchedule: n_s_bar * n_h must divide by n_p");
    return total / n_p;
}

HopCarrier hop_carrier(int n_h, const HopSchedule &schedule,
                       std::span<const double> hop_frequencies,
                       std::span<const double> phases)
{
    if (n_h < 0 || n_h >= schedule.n_h)
        throw std::invalid_argument("hop_carrier: hop index out of range");
    HopCarrier c;
    if (!hop_frequencies.empty())
        c.freq_hz = hop_frequencies[n_h % hop_frequencies.size()];
    if (!phases.empty())
        c.phase = phases[n_h % phases.size()];
    c.t_begin_s = n_h * schedule.t_h_s;
    c.t_end_s = (n_h + 1) * schedule.t_h_s;
    return c;
}

ReceivedTensor simulate_uplink_rx(const ChannelSet &ch, const HopSchedule &schedule,
                                  long n_s, std::uint64_t seed)
{
    const int n_u = static_cast<int>(ch.H_C.n_rows);
    const int n_p = static_cast<int>(ch.H_C.n_cols);
    if (n_s < 1)
        throw std::invalid_argument("simulate_uplink_rx: need at least one snapshot");

    ReceivedTensor out;
    out.schedule = schedule;
    out.samples.set_size(n_u, n_s, n_p);

    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double jam_sd = std::sqrt(ch.sigma_J_sq / 2.0);
    const double noise_sd = std::sqrt(ch.sigma_U_sq / 2.0);

    for (int p = 0; p < n_p; p++)
        for (long s = 0; s < n_s; s++)
        {
            std::complex<double> x_j(jam_sd * gauss(rng), jam_sd * gauss(rng));
            for (int rx = 0; rx < n_u; rx++)
            {
                std::complex<double> w(noise_sd * gauss(rng), noise_sd * gauss(rng));
                out.samples(rx, s, p) = ch.H_C(rx, p) + ch.h_J(rx, p) * x_j + w;
            }
        }
    return out;
}

} // namespace rplink

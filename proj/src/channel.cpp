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

#include "rplink/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rplink/rng.hpp"

namespace rplink
{

namespace
{
constexpr double c_mps = 299792458.0;
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double oneway_gain(double distance_m, double f_c_hz)
{
    if (distance_m <= 0.0 || f_c_hz <= 0.0)
        throw std::invalid_argument("oneway_gain: inputs must be positive");
    double lambda = c_mps / f_c_hz;
    return lambda / (4.0 * arma::datum::pi * distance_m);
}

double twoway_gain(double d1_m, double d2_m, double s_eff_m2, double f_c_hz)
{
    if (d1_m <= 0.0 || d2_m <= 0.0 || s_eff_m2 <= 0.0 || f_c_hz <= 0.0)
        throw std::invalid_argument("twoway_gain: inputs must be positive");
    double lambda = c_mps / f_c_hz;
    double four_pi = 4.0 * arma::datum::pi;
    return std::sqrt(s_eff_m2 * lambda * lambda) /
           std::sqrt(four_pi * four_pi * four_pi * d1_m * d1_m * d2_m * d2_m);
}

namespace
{

double path_amplitude(PathKind kind, const ScenarioConfig &cfg)
{
    if (kind == PathKind::LoS)
        return oneway_gain(cfg.d_los_m, cfg.f_c_hz);
    return twoway_gain(cfg.d_nlos_leg1_m, cfg.d_nlos_leg2_m, cfg.s_eff_m2, cfg.f_c_hz);
}

// Draw order is part of the reproducibility contract: per path rx
// elevation, rx azimuth, tx elevation, tx azimuth (controller only),
// phase; controller paths first, then jammer paths.
PathSpec draw_path(PathKind kind, bool with_tx, const ScenarioConfig &cfg, Rng &rng)
{
    std::uniform_real_distribution<double> ele(-cfg.angle_range_deg, cfg.angle_range_deg);
    std::uniform_real_distribution<double> azi(90.0 - cfg.angle_range_deg,
                                               90.0 + cfg.angle_range_deg);
    std::uniform_real_distribution<double> turn(0.0, 1.0);

    PathSpec p;
    p.kind = kind;
    double rx_el = ele(rng), rx_az = azi(rng);
    p.rx_angle = AngleDeg(rx_el, rx_az);
    if (with_tx)
    {
        double tx_el = ele(rng), tx_az = azi(rng);
        p.tx_angle = AngleDeg(tx_el, tx_az);
    }
    p.alpha = path_amplitude(kind, cfg);
    p.epsilon = turn(rng);
    return p;
}

} // namespace

ChannelSet draw_scenario(const ScenarioConfig &cfg, const PatternBank &bank,
                         std::uint64_t seed)
{
    if (cfg.controller_paths.empty() || cfg.jammer_paths.empty())
        throw std::invalid_argument("draw_scenario: need at least one path per link");
    if (cfg.angle_range_deg <= 0.0 || cfg.angle_range_deg > 70.0)
        throw std::invalid_argument("draw_scenario: angle range must be in (0, 70]");

    Rng rng(seed);
    const int n_p = static_cast<int>(bank.C.n_rows);
    const int n_u = cfg.uav_shape.total();
    const int n_c = cfg.controller_shape.total();
    const AngleGrid &grid = bank.config.grid;
    const double sqrt_pc = std::sqrt(dbm_to_watt(cfg.p_c_dbm));

    ChannelSet ch;
    ch.sigma_U_sq = dbm_to_watt(cfg.noise_psd_dbm_hz) * cfg.rx_bandwidth_hz;
    ch.sigma_J_sq = dbm_to_watt(cfg.p_j_dbm);

    for (PathKind kind : cfg.controller_paths)
    {
        PathSpec p = draw_path(kind, true, cfg, rng);
        p.alpha *= sqrt_pc;
        ch.controller_paths.push_back(p);
    }
    for (PathKind kind : cfg.jammer_paths)
        ch.jammer_paths.push_back(draw_path(kind, false, cfg, rng));

    ch.H_C_full.set_size(n_u, n_c, n_p);
    ch.H_C.set_size(n_u, n_p);
    ch.h_J.zeros(n_u, n_p);

    const std::complex<double> j2pi(0.0, -2.0 * arma::datum::pi);

    // Controller: exact continuous steering, pattern gain sampled at the
    // nearest grid point of the arrival direction.
    const auto l_c = ch.controller_paths.size();
    arma::cx_mat a_rx(n_u, l_c), a_tx_t(l_c, n_c);
    arma::vec gain_row(l_c);
    std::vector<int> rx_idx(l_c);
    for (std::size_t l = 0; l < l_c; l++)
    {
        const PathSpec &p = ch.controller_paths[l];
        a_rx.col(l) = steering_vector(cfg.uav_shape, p.rx_angle);
        a_tx_t.row(l) = steering_vector(cfg.controller_shape, p.tx_angle).st();
        rx_idx[l] = grid.nearest_index(p.rx_angle);
    }
    for (int np = 0; np < n_p; np++)
    {
        arma::cx_vec d(l_c);
        for (std::size_t l = 0; l < l_c; l++)
        {
            const PathSpec &p = ch.controller_paths[l];
            d[l] = p.alpha * bank.C(np, rx_idx[l]) * std::exp(j2pi * p.epsilon);
        }
        ch.H_C_full.slice(np) = a_rx * arma::diagmat(d) * a_tx_t;
        ch.H_C.col(np) = a_rx * d; // all-ones excitation over paths
    }

    for (const PathSpec &p : ch.jammer_paths)
    {
        arma::cx_vec a = steering_vector(cfg.uav_shape, p.rx_angle);
        int idx = grid.nearest_index(p.rx_angle);
        std::complex<double> phase = std::exp(j2pi * p.epsilon);
        for (int np = 0; np < n_p; np++)
            ch.h_J.col(np) += p.alpha * bank.C(np, idx) * phase * a;
    }

    return ch;
}

void dump_channelset(const ChannelSet &ch, const std::string &path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("dump_channelset: cannot open " + path);

    auto line = [&](const char *fmt, auto... args) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), fmt, args...);
        f << buf << "\n";
    };

    f << "# rplink-channelset-v1\n";
    line("n_u,%llu", static_cast<unsigned long long>(ch.H_C.n_rows));
    line("n_c,%llu", static_cast<unsigned long long>(ch.H_C_full.n_cols));
    line("n_p,%llu", static_cast<unsigned long long>(ch.H_C.n_cols));
    line("sigma_U_sq,%.17g", ch.sigma_U_sq);
    line("sigma_J_sq,%.17g", ch.sigma_J_sq);

    auto dump_paths = [&](const char *tag, const std::vector<PathSpec> &paths) {
        for (const PathSpec &p : paths)
            line("%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", tag,
                 p.kind == PathKind::LoS ? "los" : "nlos", p.rx_angle.elevation_deg,
                 p.rx_angle.azimuth_deg, p.tx_angle.elevation_deg, p.tx_angle.azimuth_deg,
                 p.alpha, p.epsilon);
    };
    dump_paths("controller_path", ch.controller_paths);
    dump_paths("jammer_path", ch.jammer_paths);

    for (arma::uword p = 0; p < ch.H_C.n_cols; p++)
        for (arma::uword r = 0; r < ch.H_C.n_rows; r++)
        {
            line("H_C,%llu,%llu,%.17g,%.17g", static_cast<unsigned long long>(r),
                 static_cast<unsigned long long>(p), ch.H_C(r, p).real(), ch.H_C(r, p).imag());
            line("h_J,%llu,%llu,%.17g,%.17g", static_cast<unsigned long long>(r),
                 static_cast<unsigned long long>(p), ch.h_J(r, p).real(), ch.h_J(r, p).imag());
            for (arma::uword c = 0; c < ch.H_C_full.n_cols; c++)
                line("H_C_full,%llu,%llu,%llu,%.17g,%.17g", static_cast<unsigned long long>(r),
                     static_cast<unsigned long long>(c), static_cast<unsigned long long>(p),
                     ch.H_C_full(r, c, p).real(), ch.H_C_full(r, c, p).imag());
        }
    if (!f)
        throw std::runtime_error("dump_channelset: write failed for " + path);
}

} // namespace rplink

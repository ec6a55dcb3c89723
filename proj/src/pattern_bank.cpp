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

#include "rplink/pattern_bank.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace rplink
{

AngleDeg axis_angles(int n_p, const PatternBankConfig &cfg)
{
    if (cfg.n_p_azi < 2 || cfg.n_p_ele < 2)
        throw std::invalid_argument("PatternBankConfig: need at least 2 patterns per axis");
    if (n_p < 0 || n_p >= cfg.n_p())
        throw std::invalid_argument("axis_angles: pattern index out of range");

    double step_ele = std::round(180.0 / (cfg.n_p_ele - 1));
    double step_azi = std::round(180.0 / (cfg.n_p_azi - 1));
    double el = (n_p / cfg.n_p_azi) * step_ele - 90.0;
    double az = (n_p % cfg.n_p_azi) * step_azi;
    return AngleDeg(std::clamp(el, -90.0, 90.0), std::clamp(az, 0.0, 180.0));
}

double element_gain(const FrameAngleDeg &angle, const ElementPatternParams &p)
{
    double el = angle.elevation_deg;
    double az = angle.azimuth_deg - 90.0;
    if (az > 180.0)
        az -= 360.0;
    if (az < -180.0)
        az += 360.0;

    double att_v = std::min(12.0 * (el / p.hpbw_deg) * (el / p.hpbw_deg), p.sla_db);
    double att_h = std::min(12.0 * (az / p.hpbw_deg) * (az / p.hpbw_deg), p.a_max_db);
    double att = std::min(att_v + att_h, p.a_max_db);
    return std::pow(10.0, -att / 20.0);
}

namespace
{

// Rotation taking the reference boresight (el 0, az 90, i.e. +x) to the
// given axis: rotate about z by (90 - az_axis), then about the new y by
// -el_axis. Returned as a plain 3x3.
arma::mat33 axis_rotation(const AngleDeg &axis)
{
    double a = (90.0 - axis.azimuth_deg) * deg2rad;
    double b = -axis.elevation_deg * deg2rad;

    arma::mat33 rz = {{std::cos(a), -std::sin(a), 0.0},
                      {std::sin(a), std::cos(a), 0.0},
                      {0.0, 0.0, 1.0}};
    arma::mat33 ry = {{std::cos(b), 0.0, std::sin(b)},
                      {0.0, 1.0, 0.0},
                      {-std::sin(b), 0.0, std::cos(b)}};
    return rz * ry;
}

FrameAngleDeg direction_to_frame(const arma::vec3 &v)
{
    double z = std::clamp(v[2], -1.0, 1.0);
    double el = std::asin(z) / deg2rad;
    double az;
    if (std::abs(v[0]) < 1e-14 && std::abs(v[1]) < 1e-14)
        az = 90.0; // pole convention
    else
        az = std::atan2(v[0], v[1]) / deg2rad;
    return FrameAngleDeg{el, az};
}

} // namespace

FrameAngleDeg rotate_to_boresight(const AngleDeg &grid_angle, const AngleDeg &axis)
{
    arma::mat33 rot = axis_rotation(axis);
    arma::vec3 u = unit_direction(grid_angle.elevation_deg, grid_angle.azimuth_deg);
    arma::vec3 v = rot.t() * u;
    return direction_to_frame(v);
}

PatternBank build_bank(const PatternBankConfig &cfg)
{
    if (cfg.element.hpbw_deg <= 0.0 || cfg.element.sla_db <= 0.0 || cfg.element.a_max_db <= 0.0)
        throw std::invalid_argument("ElementPatternParams: values must be positive");

    const AngleGrid &grid = cfg.grid;
    const int n_a = grid.total();
    const int n_p = cfg.n_p();

    PatternBank bank;
    bank.config = cfg;
    bank.axes.reserve(n_p);
    for (int i = 0; i < n_p; i++)
        bank.axes.push_back(axis_angles(i, cfg));

    // Direction vectors and solid-angle weights, shared by all rows.
    arma::mat dirs(3, n_a);
    arma::vec weight(n_a);
    const double cell = deg2rad * deg2rad;
    for (int i = 0; i < n_a; i++)
    {
        AngleDeg a = grid.index_to_angles(i);
        dirs.col(i) = unit_direction(a.elevation_deg, a.azimuth_deg);
        weight[i] = std::cos(a.elevation_deg * deg2rad) * cell;
    }

    bank.C.set_size(n_p, n_a);

#pragma omp parallel for schedule(static)
    for (int row = 0; row < n_p; row++)
    {
        arma::mat33 rot_t = axis_rotation(bank.axes[row]).t();
        double power = 0.0;
        for (int i = 0; i < n_a; i++)
        {
            arma::vec3 v = rot_t * dirs.col(i);
            double g = element_gain(direction_to_frame(v), cfg.element);
            bank.C(row, i) = g;
            power += g * g * weight[i];
        }
        bank.C.row(row) /= std::sqrt(power);
    }

    bank.C_N = column_normalized(bank.C);
    return bank;
}

PatternBank build_omni_bank(const AngleGrid &grid)
{
    const int n_a = grid.total();
    double power = 0.0;
    const double cell = deg2rad * deg2rad;
    for (int i = 0; i < n_a; i++)
        power += std::cos(grid.index_to_angles(i).elevation_deg * deg2rad) * cell;

    PatternBank bank;
    bank.config.n_p_azi = 1;
    bank.config.n_p_ele = 1;
    bank.config.grid = grid;
    bank.C = arma::mat(1, n_a, arma::fill::value(1.0 / std::sqrt(power)));
    bank.C_N = arma::mat(1, n_a, arma::fill::ones);
    bank.axes = {AngleDeg(0.0, 90.0)};
    return bank;
}

arma::mat column_normalized(const arma::mat &C)
{
    arma::mat out = C;
    arma::rowvec norms = arma::sqrt(arma::sum(arma::square(C), 0));
    for (arma::uword j = 0; j < out.n_cols; j++)
        if (norms[j] >= 1e-12)
            out.col(j) /= norms[j];
    return out;
}

// Bank file layout (little-endian): magic "RPLBANK1", int32 n_p_azi,
// n_p_ele, grid n_azi, grid n_ele, float64 hpbw, sla, a_max, then the gain
// matrix C row-major (n_p rows of n_a float64).
void save_bank(const PatternBank &bank, const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("save_bank: cannot open " + path);

    f.write("RPLBANK1", 8);
    int32_t dims[4] = {bank.config.n_p_azi, bank.config.n_p_ele,
                       bank.config.grid.n_azi, bank.config.grid.n_ele};
    f.write(reinterpret_cast<const char *>(dims), sizeof(dims));
    double par[3] = {bank.config.element.hpbw_deg, bank.config.element.sla_db,
                     bank.config.element.a_max_db};
    f.write(reinterpret_cast<const char *>(par), sizeof(par));

    arma::mat rowmajor = bank.C.t(); // arma stores column-major
    f.write(reinterpret_cast<const char *>(rowmajor.memptr()),
            static_cast<std::streamsize>(rowmajor.n_elem * sizeof(double)));
    if (!f)
        throw std::runtime_error("save_bank: write failed for " + path);
}

PatternBank load_bank(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("load_bank: cannot open " + path);

    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "RPLBANK1")
        throw std::runtime_error("load_bank: bad magic in " + path);

    int32_t dims[4];
    double par[3];
    f.read(reinterpret_cast<char *>(dims), sizeof(dims));
    f.read(reinterpret_cast<char *>(par), sizeof(par));
    if (!f || dims[0] < 1 || dims[1] < 1 || dims[2] < 1 || dims[3] < 1)
        throw std::runtime_error("load_bank: corrupt header in " + path);

    PatternBank bank;
    bank.config.n_p_azi = dims[0];
    bank.config.n_p_ele = dims[1];
    bank.config.grid.n_azi = dims[2];
    bank.config.grid.n_ele = dims[3];
    bank.config.element.hpbw_deg = par[0];
    bank.config.element.sla_db = par[1];
    bank.config.element.a_max_db = par[2];

    const int n_p = bank.config.n_p();
    const int n_a = bank.config.grid.total();
    arma::mat rowmajor(n_a, n_p);
    f.read(reinterpret_cast<char *>(rowmajor.memptr()),
           static_cast<std::streamsize>(rowmajor.n_elem * sizeof(double)));
    if (!f)
        throw std::runtime_error("load_bank: truncated matrix in " + path);
    if (rowmajor.min() < 0.0)
        throw std::runtime_error("load_bank: negative gain entries in " + path);

    bank.C = rowmajor.t();
    bank.C_N = column_normalized(bank.C);
    if (bank.config.n_p_azi >= 2 && bank.config.n_p_ele >= 2)
        for (int i = 0; i < n_p; i++)
            bank.axes.push_back(axis_angles(i, bank.config));
    return bank;
}

} // namespace rplink

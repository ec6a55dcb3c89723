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

#include <armadillo>

namespace rplink
{

constexpr double deg2rad = 0.017453292519943295;

/// Direction in degrees. Azimuth spans [0, 180] with the array boresight at
/// 90, elevation spans [-90, 90]. Construction validates the ranges.
struct AngleDeg
{
    double elevation_deg = 0.0;
    double azimuth_deg = 90.0;

    AngleDeg() = default;
    AngleDeg(double elevation, double azimuth);
};

/// Direction expressed relative to a pattern boresight. Azimuth may leave
/// [0, 180] for directions behind the pattern, range (-180, 180].
struct FrameAngleDeg
{
    double elevation_deg = 0.0;
    double azimuth_deg = 90.0;
};

/// Sampling lattice over elevation [-90, 90] x azimuth [0, n_azi-1] in 1
/// degree steps. Grid index n maps to elevation floor(n/n_azi)-90 and
/// azimuth mod(n, n_azi).
struct AngleGrid
{
    int n_azi = 181;
    int n_ele = 181;

    int total() const { return n_azi * n_ele; }

    AngleDeg index_to_angles(int n_a) const;
    int angles_to_index(const AngleDeg &a) const;

    /// Nearest lattice index for a continuous direction (rounded, clamped).
    int nearest_index(const AngleDeg &a) const;
};

/// Uniform planar array layout: n_azi elements along the y-axis, n_ele
/// elements along the z-axis, half-wavelength spacing.
struct UpaShape
{
    int n_azi = 1;
    int n_ele = 1;

    int total() const { return n_azi * n_ele; }
};

/// UPA steering vector. Element n carries the phase
/// pi * (mod(n, n_azi) * cos(el) * cos(az) + floor(n / n_azi) * sin(el)).
arma::cx_vec steering_vector(const UpaShape &shape, const AngleDeg &angle);

/// Steering vectors for every grid direction, one row per grid index
/// (total x shape.total). The -90 degree elevation offset of the grid
/// mapping is applied to each row.
arma::cx_mat steering_matrix_grid(const UpaShape &shape, const AngleGrid &grid);

/// Unit direction vector (x, y, z) for a direction in degrees:
/// x = cos(el) sin(az), y = cos(el) cos(az), z = sin(el).
arma::vec3 unit_direction(double elevation_deg, double azimuth_deg);

} // namespace rplink

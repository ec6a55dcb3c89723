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

#include "rplink/angles.hpp"

#include <cmath>
#include <stdexcept>

namespace rplink
{

AngleDeg::AngleDeg(double elevation, double azimuth)
    : elevation_deg(elevation), azimuth_deg(azimuth)
{
    if (!(elevation >= -90.0 && elevation <= 90.0))
        throw std::invalid_argument("AngleDeg: elevation out of [-90, 90]");
    if (!(azimuth >= 0.0 && azimuth <= 180.0))
        throw std::invalid_argument("AngleDeg: azimuth out of [0, 180]");
}

AngleDeg AngleGrid::index_to_angles(int n_a) const
{
    if (n_a < 0 || n_a >= total())
        throw std::invalid_argument("AngleGrid: index out of range");
    double el = static_cast<double>(n_a / n_azi) - 90.0;
    double az = static_cast<double>(n_a % n_azi);
    return AngleDeg(el, az);
}

int AngleGrid::angles_to_index(const AngleDeg &a) const
{
    int el = static_cast<int>(std::lround(a.elevation_deg));
    int az = static_cast<int>(std::lround(a.azimuth_deg));
    int row = el + 90;
    if (row < 0 || row >= n_ele || az < 0 || az >= n_azi)
        throw std::invalid_argument("AngleGrid: angle outside the lattice");
    return row * n_azi + az;
}

int AngleGrid::nearest_index(const AngleDeg &a) const
{
    long row = std::lround(a.elevation_deg) + 90;
    long col = std::lround(a.azimuth_deg);
    row = std::clamp(row, 0L, static_cast<long>(n_ele - 1));
    col = std::clamp(col, 0L, static_cast<long>(n_azi - 1));
    return static_cast<int>(row * n_azi + col);
}

arma::cx_vec steering_vector(const UpaShape &shape, const AngleDeg &angle)
{
    if (shape.total() < 1)
        throw std::invalid_argument("UpaShape: empty array");

    double el = angle.elevation_deg * deg2rad;
    double az = angle.azimuth_deg * deg2rad;
    double u = std::cos(el) * std::cos(az); // phase slope along y
    double v = std::sin(el);                // phase slope along z

    arma::cx_vec a(shape.total());
    for (int n = 0; n < shape.total(); n++)
    {
        double phase = arma::datum::pi * ((n % shape.n_azi) * u + (n / shape.n_azi) * v);
        a[n] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return a;
}

arma::cx_mat steering_matrix_grid(const UpaShape &shape, const AngleGrid &grid)
{
    arma::cx_mat A(grid.total(), shape.total());
    for (int n_a = 0; n_a < grid.total(); n_a++)
        A.row(n_a) = steering_vector(shape, grid.index_to_angles(n_a)).st();
    return A;
}

arma::vec3 unit_direction(double elevation_deg, double azimuth_deg)
{
    double el = elevation_deg * deg2rad;
    double az = azimuth_deg * deg2rad;
    return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

} // namespace rplink

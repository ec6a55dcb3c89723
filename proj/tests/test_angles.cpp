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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rplink/angles.hpp"

using namespace rplink;

TEST_CASE("grid index to angles")
{
    AngleGrid grid;

    AngleDeg a0 = grid.index_to_angles(0);
    CHECK(a0.elevation_deg == -90.0);
    CHECK(a0.azimuth_deg == 0.0);

    AngleDeg a1 = grid.index_to_angles(181);
    CHECK(a1.elevation_deg == -89.0);
    CHECK(a1.azimuth_deg == 0.0);

    AngleDeg a2 = grid.index_to_angles(16380); // 90*181 + 90
    CHECK(a2.elevation_deg == 0.0);
    CHECK(a2.azimuth_deg == 90.0);

    CHECK_THROWS_AS(grid.index_to_angles(-1), std::invalid_argument);
    CHECK_THROWS_AS(grid.index_to_angles(grid.total()), std::invalid_argument);
}

TEST_CASE("index round trip is exact on every grid point")
{
    AngleGrid grid;
    for (int n = 0; n < grid.total(); n++)
        REQUIRE(grid.angles_to_index(grid.index_to_angles(n)) == n);
}

TEST_CASE("nearest index rounds and clamps")
{
    AngleGrid grid;
    CHECK(grid.nearest_index(AngleDeg(0.4, 90.49)) == 90 * 181 + 90);
    CHECK(grid.nearest_index(AngleDeg(-89.7, 0.2)) == 181 * 0 + 0 + 181 * 0); // rounds to -90
    CHECK(grid.nearest_index(AngleDeg(89.6, 179.6)) == 180 * 181 + 180);
}

TEST_CASE("angle validation")
{
    CHECK_THROWS_AS(AngleDeg(91.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AngleDeg(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(AngleDeg(0.0, 180.5), std::invalid_argument);
    CHECK_NOTHROW(AngleDeg(-90.0, 180.0));
}

TEST_CASE("steering vector basics")
{
    CHECK(steering_vector(UpaShape{1, 1}, AngleDeg(12.0, 34.0))[0] == std::complex<double>(1.0, 0.0));

    // cos(90 deg) = 0 and sin(0) = 0 zero out every phase term
    arma::cx_vec ones22 = steering_vector(UpaShape{2, 2}, AngleDeg(0.0, 90.0));
    for (arma::uword i = 0; i < 4; i++)
        CHECK(std::abs(ones22[i] - std::complex<double>(1.0, 0.0)) < 1e-12);

    // hand evaluation: element 1 carries exp(j pi) = -1
    arma::cx_vec v = steering_vector(UpaShape{2, 1}, AngleDeg(0.0, 0.0));
    CHECK(std::abs(v[0] - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(v[1] - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("steering entries are unit modulus and self-product equals the count")
{
    UpaShape shape{3, 4};
    for (double el : {-80.0, -15.5, 0.0, 42.0, 90.0})
        for (double az : {0.0, 33.3, 90.0, 179.0})
        {
            arma::cx_vec a = steering_vector(shape, AngleDeg(el, az));
            for (arma::uword i = 0; i < a.n_elem; i++)
                CHECK(std::abs(std::abs(a[i]) - 1.0) < 1e-12);
            CHECK(std::real(arma::cdot(a, a)) == doctest::Approx(shape.total()).epsilon(1e-12));
            CHECK(std::abs(std::imag(arma::cdot(a, a))) < 1e-12);
        }
}

TEST_CASE("grid steering matrix applies the elevation offset")
{
    AngleGrid grid;
    UpaShape shape{2, 2};
    arma::cx_mat A = steering_matrix_grid(shape, grid);
    REQUIRE(A.n_rows == arma::uword(grid.total()));
    REQUIRE(A.n_cols == 4);

    // the row mapping to (el 0, az 90) must be all ones
    arma::cx_rowvec r = A.row(16380);
    for (arma::uword i = 0; i < 4; i++)
        CHECK(std::abs(r[i] - std::complex<double>(1.0, 0.0)) < 1e-12);

    // single-element shape gives the all-ones column
    arma::cx_mat A1 = steering_matrix_grid(UpaShape{1, 1}, grid);
    CHECK(arma::norm(A1 - arma::cx_mat(grid.total(), 1, arma::fill::ones), "fro") < 1e-12);

    // spot-check unit modulus on a few rows
    for (int n : {7, 999, 16380, 32760})
        for (arma::uword i = 0; i < 4; i++)
            CHECK(std::abs(std::abs(A(n, i)) - 1.0) < 1e-12);

    // every row equals the steering vector at its grid angle
    for (int n : {0, 181, 5000, 20000})
    {
        arma::cx_vec direct = steering_vector(shape, grid.index_to_angles(n));
        CHECK(arma::norm(A.row(n).st() - direct, 2) < 1e-12);
    }
}

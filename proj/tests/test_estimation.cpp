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

#include <algorithm>

#include "rplink/estimation.hpp"
#include "rplink/rng.hpp"

using namespace rplink;

namespace
{

const PatternBank &bank65()
{
    static PatternBank bank = [] {
        PatternBankConfig cfg;
        cfg.n_p_azi = 7;
        cfg.n_p_ele = 7;
        cfg.element.hpbw_deg = 65.0;
        return build_bank(cfg);
    }();
    return bank;
}

ReceivedTensor wrap(arma::cx_cube samples)
{
    ReceivedTensor y;
    y.samples = std::move(samples);
    return y;
}

// Brute-force correlation argmax over all grid columns, independent of the
// OMP implementation path (single antenna case).
int brute_force_pick(const arma::cx_mat &S_U, const arma::mat &C_N)
{
    int best = 0;
    double best_val = -1.0;
    for (arma::uword j = 0; j < C_N.n_cols; j++)
    {
        std::complex<double> acc(0.0, 0.0);
        for (arma::uword p = 0; p < C_N.n_rows; p++)
            acc += C_N(p, j) * S_U(0, p);
        if (std::abs(acc) > best_val)
        {
            best_val = std::abs(acc);
            best = static_cast<int>(j);
        }
    }
    return best;
}

} // namespace

TEST_CASE("snapshot averaging")
{
    arma::cx_cube c(2, 5, 3);
    c.fill(std::complex<double>(0.25, -1.5));
    arma::cx_mat m = average_snapshots(wrap(c));
    REQUIRE(m.n_rows == 2);
    REQUIRE(m.n_cols == 3);
    CHECK(std::abs(m(1, 2) - std::complex<double>(0.25, -1.5)) < 1e-15);

    // noiseless case: the average is the channel itself
    const PatternBank &bank = bank65();
    ChannelSet ch;
    ch.H_C = arma::cx_mat(1, bank.C.n_rows, arma::fill::randn);
    ch.h_J = arma::cx_mat(1, bank.C.n_rows, arma::fill::zeros);
    ch.sigma_U_sq = 0.0;
    ch.sigma_J_sq = 1.0;
    HopSchedule s;
    s.n_p = static_cast<int>(bank.C.n_rows);
    s.n_h = s.n_p;
    ReceivedTensor y = simulate_uplink_rx(ch, s, 10, 3);
    CHECK(arma::norm(average_snapshots(y) - ch.H_C, "fro") < 1e-12);
}

TEST_CASE("omp recovers a single on-grid path exactly")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;
    UpaShape one{1, 1};
    arma::cx_mat abar = steering_matrix_grid(one, grid);

    Rng rng(2024);
    std::uniform_int_distribution<int> el(-70, 70), az(20, 160);
    for (int trial = 0; trial < 25; trial++)
    {
        int idx = grid.angles_to_index(AngleDeg(el(rng), az(rng)));
        arma::cx_mat s_u = std::complex<double>(3.2e-5, -1.1e-5) *
                           arma::conv_to<arma::cx_mat>::from(bank.C.col(idx).t());

        ControllerEstimate est = omp_mmv(s_u, bank.C, bank.C_N, abar, grid, OmpConfig{});
        REQUIRE(!est.failed);
        REQUIRE(est.l_hat() == 1); // one projection removes everything
        CHECK(est.zeta[0] == idx);
        CHECK(est.zeta[0] == brute_force_pick(s_u, bank.C_N));
        CHECK(est.angles[0].elevation_deg == grid.index_to_angles(idx).elevation_deg);
        CHECK(est.angles[0].azimuth_deg == grid.index_to_angles(idx).azimuth_deg);
        CHECK(!est.residual_floor);
        CHECK(est.alpha_hat[0] ==
              doctest::Approx(std::abs(std::complex<double>(3.2e-5, -1.1e-5))).epsilon(1e-9));
    }
}

TEST_CASE("omp pick is invariant to positive rescaling")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;
    UpaShape one{1, 1};
    arma::cx_mat abar = steering_matrix_grid(one, grid);

    int idx = grid.angles_to_index(AngleDeg(10.0, 75.0));
    arma::cx_mat s_u = arma::conv_to<arma::cx_mat>::from(bank.C.col(idx).t());
    ControllerEstimate a = omp_mmv(s_u, bank.C, bank.C_N, abar, grid, OmpConfig{});
    ControllerEstimate b = omp_mmv(37.5 * s_u, bank.C, bank.C_N, abar, grid, OmpConfig{});
    CHECK(a.zeta == b.zeta);
}

TEST_CASE("omp on empty input flags failure")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;
    arma::cx_mat zero(1, bank.C.n_rows, arma::fill::zeros);
    UpaShape one{1, 1};
    ControllerEstimate est =
        omp_mmv(zero, bank.C, bank.C_N, steering_matrix_grid(one, grid), grid, OmpConfig{});
    CHECK(est.failed);
    CHECK(est.l_hat() == 0);
}

TEST_CASE("omp never repeats an index under jamming and noise")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;
    UpaShape shape{2, 2};
    arma::cx_mat abar = steering_matrix_grid(shape, grid);

    for (std::uint64_t seed = 1; seed <= 5; seed++)
    {
        ScenarioConfig sc;
        ChannelSet ch = draw_scenario(sc, bank, seed);
        HopSchedule s;
        s.n_p = static_cast<int>(bank.C.n_rows);
        s.n_h = s.n_p;
        ReceivedTensor y = simulate_uplink_rx(ch, s, 200, seed + 100);
        ControllerEstimate est =
            omp_mmv(average_snapshots(y), bank.C, bank.C_N, abar, grid, OmpConfig{});
        std::vector<int> sorted = est.zeta;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        CHECK(est.l_hat() <= OmpConfig{}.max_paths);
    }
}

TEST_CASE("subtracting a perfect estimate leaves nothing")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;
    UpaShape shape{2, 2};
    arma::cx_mat abar = steering_matrix_grid(shape, grid);

    int idx = grid.angles_to_index(AngleDeg(-20.0, 110.0));
    arma::cx_vec a = steering_vector(shape, grid.index_to_angles(idx));
    ChannelSet ch;
    ch.H_C.set_size(4, bank.C.n_rows);
    for (arma::uword p = 0; p < bank.C.n_rows; p++)
        ch.H_C.col(p) = 2.7e-5 * bank.C(p, idx) * a;
    ch.h_J = arma::cx_mat(4, bank.C.n_rows, arma::fill::zeros);
    ch.sigma_U_sq = 0.0;
    ch.sigma_J_sq = 1.0;

    HopSchedule s;
    s.n_p = static_cast<int>(bank.C.n_rows);
    s.n_h = s.n_p;
    ReceivedTensor y = simulate_uplink_rx(ch, s, 8, 17);

    ControllerEstimate est =
        omp_mmv(average_snapshots(y), bank.C, bank.C_N, abar, grid, OmpConfig{});
    REQUIRE(est.l_hat() == 1);
    REQUIRE(est.zeta[0] == idx);

    ReceivedTensor res = subtract_controller(y, est, bank.C);
    double remaining = 0.0;
    for (arma::uword p = 0; p < res.samples.n_slices; p++)
        remaining += arma::norm(res.samples.slice(p), "fro");
    CHECK(remaining < 1e-12);

    // empty estimate leaves the tensor untouched
    ControllerEstimate none;
    ReceivedTensor same = subtract_controller(y, none, bank.C);
    double diff = 0.0;
    for (arma::uword p = 0; p < y.samples.n_slices; p++)
        diff += arma::norm(same.samples.slice(p) - y.samples.slice(p), "fro");
    CHECK(diff == 0.0);
}

TEST_CASE("folded-normal magnitude estimator")
{
    // |y| for y ~ CN(0, Sigma^2) has mean Sigma sqrt(2/pi); with unit
    // |h_J|, unit sigma_J and no noise the estimate converges to 1.
    ChannelSet ch;
    ch.H_C = arma::cx_mat(1, 2, arma::fill::zeros);
    ch.h_J = arma::cx_mat(1, 2, arma::fill::ones);
    ch.sigma_U_sq = 0.0;
    ch.sigma_J_sq = 1.0;
    HopSchedule s;
    s.n_p = 2;
    s.n_h = 2;
    ReceivedTensor y = simulate_uplink_rx(ch, s, 200000, 41);

    arma::mat est = jammer_magnitude(y, 0.0, 1.0);
    CHECK(est(0, 0) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(est(0, 1) == doctest::Approx(1.0).epsilon(0.01));

    // complex magnitude mean is Sigma sqrt(pi)/2 (the inverted constant)
    double s_j = arma::accu(arma::abs(y.samples.slice(0))) / 200000.0;
    CHECK(s_j == doctest::Approx(0.8862269254527580).epsilon(0.01));

    // the real-part folded-normal mean is Sigma sqrt(2/pi)
    double s_re = arma::accu(arma::abs(arma::real(y.samples.slice(0)))) / 200000.0;
    CHECK(s_re == doctest::Approx(0.7978845608028654 / std::sqrt(2.0)).epsilon(0.01));

    // pure noise clamps toward zero
    ChannelSet noise_only = ch;
    noise_only.h_J.zeros();
    noise_only.sigma_U_sq = 1.0;
    ReceivedTensor yn = simulate_uplink_rx(noise_only, s, 100000, 43);
    arma::mat est_n = jammer_magnitude(yn, 1.0, 1.0);
    CHECK(est_n(0, 0) < 0.05);
}

TEST_CASE("jammer grid search finds an on-grid jammer exactly")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;

    Rng rng(5150);
    std::uniform_int_distribution<int> el(-70, 70), az(20, 160);
    for (int trial = 0; trial < 10; trial++)
    {
        int idx = grid.angles_to_index(AngleDeg(el(rng), az(rng)));
        // exact |H_J| for a 2-antenna UAV: alpha * pattern gain, equal rows
        arma::mat h = arma::repmat(4.9e-5 * bank.C.col(idx).t(), 2, 1);
        JammerEstimate est = jammer_ml_angle(h, bank.C_N, grid);
        CHECK(est.grid_index == idx);

        // independent argmax over all columns
        arma::rowvec score = arma::sum(h, 0) * bank.C_N;
        CHECK(est.grid_index == static_cast<int>(score.index_max()));
    }
}

TEST_CASE("jammer search argmax is scale invariant and deterministic on flat input")
{
    const PatternBank &bank = bank65();
    const AngleGrid &grid = bank.config.grid;

    arma::mat flat(2, bank.C.n_rows, arma::fill::ones);
    JammerEstimate est = jammer_ml_angle(flat, bank.C_N, grid);
    arma::rowvec colsum = arma::sum(bank.C_N, 0);
    CHECK(est.grid_index == static_cast<int>(colsum.index_max()));

    JammerEstimate scaled = jammer_ml_angle(1234.5 * flat, bank.C_N, grid);
    CHECK(scaled.grid_index == est.grid_index);
}

TEST_CASE("music locates a single clean source within the grid limit")
{
    const AngleGrid &grid = bank65().config.grid;
    UpaShape shape{2, 2};
    PatternBank omni = build_omni_bank(grid); // fixed pattern

    AngleDeg truth(14.0, 121.0);
    ChannelSet ch;
    arma::cx_vec a = steering_vector(shape, truth);
    ch.H_C = arma::cx_mat(4, 1);
    ch.H_C.col(0) = 1e-3 * a;
    ch.h_J = arma::cx_mat(4, 1, arma::fill::zeros);
    ch.sigma_U_sq = 1e-9;
    ch.sigma_J_sq = 1.0;

    HopSchedule s;
    s.n_p = 1;
    s.n_h = 1;
    ReceivedTensor y = simulate_uplink_rx(ch, s, 500, 7);

    std::vector<AngleDeg> peaks = music_baseline(y, 1, shape, grid);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].elevation_deg - truth.elevation_deg) <= 1.0);
    CHECK(std::abs(peaks[0].azimuth_deg - truth.azimuth_deg) <= 1.0);

    // covariance-peak oracle (Bartlett scan) agrees to within the grid step
    arma::cx_mat R(4, 4, arma::fill::zeros);
    for (arma::uword t = 0; t < y.samples.n_cols; t++)
    {
        arma::cx_vec v = y.samples.slice(0).col(t);
        R += v * v.t();
    }
    arma::cx_mat A = steering_matrix_grid(shape, grid); // rows a^T
    arma::vec bartlett = arma::real(arma::sum((arma::conj(A) * R) % A, 1)); // a^H R a
    AngleDeg oracle = grid.index_to_angles(static_cast<int>(bartlett.index_max()));
    CHECK(std::abs(oracle.elevation_deg - peaks[0].elevation_deg) <= 1.0);
    CHECK(std::abs(oracle.azimuth_deg - peaks[0].azimuth_deg) <= 1.0);
}

TEST_CASE("music is inapplicable without spare antennas")
{
    const AngleGrid &grid = bank65().config.grid;
    arma::cx_cube c(2, 16, 1, arma::fill::randn);
    CHECK_THROWS_AS(music_baseline(wrap(c), 2, UpaShape{2, 1}, grid), std::invalid_argument);
}

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

#include "rplink/link_opt.hpp"
#include "rplink/rng.hpp"

using namespace rplink;

namespace
{

arma::cx_mat random_psd(int n, Rng &rng, int rank = -1)
{
    if (rank < 0)
        rank = n;
    std::normal_distribution<double> g(0.0, 1.0);
    arma::cx_mat M(n, rank);
    for (auto &v : M)
        v = std::complex<double>(g(rng), g(rng));
    return M * M.t();
}

// Independent dense route for the dominant generalized eigenvalue.
double oracle_lambda(const arma::cx_mat &A, const arma::cx_mat &B_eps)
{
    arma::cx_vec eigval;
    arma::cx_mat l_vec, r_vec;
    if (!arma::eig_pair(eigval, l_vec, r_vec, A, B_eps))
        throw std::runtime_error("eig_pair failed");
    return arma::real(eigval).max();
}

ControllerEstimate stub_estimate(const std::vector<int> &zeta,
                                 const std::vector<AngleDeg> &angles,
                                 const arma::vec &alpha)
{
    ControllerEstimate est;
    est.zeta = zeta;
    est.angles = angles;
    est.alpha_hat = alpha;
    return est;
}

} // namespace

TEST_CASE("quadratic forms")
{
    AngleGrid grid;
    UpaShape one{1, 1};
    ControllerEstimate est =
        stub_estimate({100, 200}, {grid.index_to_angles(100), grid.index_to_angles(200)},
                      arma::vec{2.0, 0.5});
    JammerEstimate jam;
    jam.grid_index = 300;
    jam.angle = grid.index_to_angles(300);

    arma::mat C(3, grid.total(), arma::fill::ones);
    C.row(1) *= 2.0;

    auto [a1, b1] = build_quadratic_forms(est, jam, C, 1, one);
    REQUIRE(a1.n_rows == 1);
    CHECK(std::real(a1(0, 0)) == doctest::Approx(4.0 * 4.0 + 0.25 * 4.0));
    CHECK(std::real(b1(0, 0)) == doctest::Approx(4.0));

    // Hermitian PSD on a multi-antenna shape
    UpaShape shape{2, 2};
    auto [a4, b4] = build_quadratic_forms(est, jam, C, 0, shape);
    CHECK(arma::norm(a4 - a4.t(), "fro") < 1e-12);
    CHECK(arma::norm(b4 - b4.t(), "fro") < 1e-12);
    arma::vec ev_a = arma::eig_sym(a4);
    CHECK(ev_a.min() > -1e-10);

    // single unit-gain path: rank one with eigenvalue N_U C^2
    ControllerEstimate single =
        stub_estimate({100}, {grid.index_to_angles(100)}, arma::vec{1.0});
    auto [a_s, b_s] = build_quadratic_forms(single, jam, C, 0, shape);
    arma::vec ev = arma::eig_sym(a_s);
    CHECK(ev[3] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(std::abs(ev[2]) < 1e-10);
}

TEST_CASE("rayleigh solver limit cases")
{
    const double eps = 1e-8;
    arma::cx_mat eye4(arma::eye(4, 4), arma::mat(4, 4, arma::fill::zeros));

    RayleighResult r = rayleigh_max(eye4, eye4, eps);
    CHECK(r.lambda == doctest::Approx(1.0 / (1.0 + eps)).epsilon(1e-10));
    CHECK(arma::norm(r.b, 2) == doctest::Approx(1.0).epsilon(1e-12));

    // loading-dominated case: B = 0, A rank one
    Rng rng(3);
    arma::cx_mat A = random_psd(4, rng, 1);
    arma::cx_mat zero(4, 4, arma::fill::zeros);
    RayleighResult r2 = rayleigh_max(A, zero, eps);
    arma::vec ev;
    arma::cx_mat evec;
    arma::eig_sym(ev, evec, A);
    CHECK(r2.lambda == doctest::Approx(ev[3] / eps).epsilon(1e-8));
    CHECK(std::abs(arma::cdot(r2.b, evec.col(3))) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("rayleigh solver matches the dense generalized oracle")
{
    const double eps = 1e-8;
    Rng rng(99);
    for (int n : {1, 2, 4})
        for (int rep = 0; rep < 40; rep++)
        {
            // full-rank B keeps the generalized problem well conditioned so
            // two independent dense routes can agree tightly
            arma::cx_mat A = random_psd(n, rng);
            arma::cx_mat B = random_psd(n, rng);
            arma::cx_mat B_eps =
                B + eps * arma::cx_mat(arma::eye(n, n), arma::mat(n, n, arma::fill::zeros));

            RayleighResult r = rayleigh_max(A, B, eps);
            double resid = arma::norm(A * r.b - r.lambda * (B_eps * r.b), 2);
            CHECK(resid <= 1e-6 * arma::norm(A, 2));
            double oracle = oracle_lambda(A, B_eps);
            CHECK(std::abs(r.lambda - oracle) <= 1e-8 * std::abs(oracle));
        }

    // rank-deficient B (the jamming quadratic form is rank one): the
    // loaded eigenvalue is huge and only the residual bound is meaningful
    for (int n : {2, 4})
        for (int rep = 0; rep < 20; rep++)
        {
            arma::cx_mat A = random_psd(n, rng);
            arma::cx_mat B = random_psd(n, rng, 1);
            arma::cx_mat B_eps =
                B + eps * arma::cx_mat(arma::eye(n, n), arma::mat(n, n, arma::fill::zeros));
            RayleighResult r = rayleigh_max(A, B, eps);
            double resid = arma::norm(A * r.b - r.lambda * (B_eps * r.b), 2);
            CHECK(resid <= 1e-6 * arma::norm(A, 2));
        }
}

TEST_CASE("water filling closed forms")
{
    // equal eigenvalues share the budget equally
    arma::vec p = water_filling(arma::vec{2.0, 2.0, 2.0}, 1.0, 3.0);
    for (double v : p)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // single channel takes everything
    p = water_filling(arma::vec{0.7}, 0.5, 2.0);
    CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-12));

    // boundary two-channel case: mu = (1 + 1 + 2)/2 = 2 leaves channel 2
    // exactly empty
    p = water_filling(arma::vec{1.0, 0.5}, 1.0, 1.0);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[1] == 0.0);

    // interior two-channel case, analytic level mu = (P + 1 + 1.25)/2
    p = water_filling(arma::vec{1.0, 0.8}, 1.0, 1.0);
    CHECK(p[0] == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.375).epsilon(1e-12));

    // all-zero spectrum allocates nothing
    p = water_filling(arma::vec{0.0, 0.0}, 1.0, 1.0);
    CHECK(arma::accu(p) == 0.0);

    CHECK_THROWS_AS(water_filling(arma::vec{1.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("water filling satisfies budget and complementary slackness")
{
    Rng rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; rep++)
    {
        int n = 1 + int(u(rng) * 6);
        arma::vec lam(n);
        for (auto &v : lam)
            v = u(rng) < 0.15 ? 0.0 : std::pow(10.0, -3.0 + 6.0 * u(rng));
        if (lam.max() <= 0.0)
            lam[0] = 1.0;
        double noise = std::pow(10.0, -2.0 + 4.0 * u(rng));
        double budget = std::pow(10.0, -2.0 + 4.0 * u(rng));

        arma::vec p = water_filling(lam, noise, budget);
        CHECK(std::abs(arma::accu(p) - budget) <= 1e-9 * budget);

        double mu = 0.0;
        for (arma::uword i = 0; i < lam.n_elem; i++)
            if (p[i] > 0.0)
                mu = std::max(mu, p[i] + noise / lam[i]);
        for (arma::uword i = 0; i < lam.n_elem; i++)
        {
            CHECK(p[i] >= 0.0);
            if (p[i] > 0.0)
                CHECK(std::abs(p[i] + noise / lam[i] - mu) <= 1e-9 * mu);
            else if (lam[i] > 0.0)
                CHECK(mu <= noise / lam[i] + 1e-9 * mu);
        }
    }
}

TEST_CASE("alternating optimization improves and converges")
{
    AngleGrid grid;
    UpaShape shape{2, 2};
    PatternBankConfig cfg;
    cfg.n_p_azi = 5;
    cfg.n_p_ele = 5;
    cfg.element.hpbw_deg = 45.0;
    PatternBank bank = build_bank(cfg);

    Rng rng(71);
    std::uniform_int_distribution<int> el(-70, 70), az(20, 160);
    for (int rep = 0; rep < 10; rep++)
    {
        int i_c = grid.angles_to_index(AngleDeg(el(rng), az(rng)));
        int i_n = grid.angles_to_index(AngleDeg(el(rng), az(rng)));
        int i_j = grid.angles_to_index(AngleDeg(el(rng), az(rng)));
        ControllerEstimate est = stub_estimate(
            {i_c, i_n}, {grid.index_to_angles(i_c), grid.index_to_angles(i_n)},
            arma::vec{3.4e-5, 3.0e-7});
        JammerEstimate jam;
        jam.grid_index = i_j;
        jam.angle = grid.index_to_angles(i_j);

        UplinkDesign d = uplink_alternating_opt(est, jam, bank.C, shape,
                                                uniform_combiner(shape.total()));
        REQUIRE(d.iterations >= 1);
        CHECK(d.iterations <= 20);
        CHECK(arma::norm(d.combiner, 2) == doctest::Approx(1.0).epsilon(1e-10));
        for (std::size_t k = 1; k < d.objective_trace.size(); k++)
            CHECK(d.objective_trace[k] >= d.objective_trace[k - 1]);
    }
}

TEST_CASE("jammer-free limit reduces to max-gain combining")
{
    AngleGrid grid;
    UpaShape shape{2, 2};
    int i_c = grid.angles_to_index(AngleDeg(5.0, 80.0));
    int i_j = grid.angles_to_index(AngleDeg(-40.0, 150.0));

    // one pattern, jam column identically zero
    arma::mat C(1, grid.total(), arma::fill::ones);
    C(0, i_j) = 0.0;

    ControllerEstimate est = stub_estimate({i_c}, {grid.index_to_angles(i_c)}, arma::vec{1.0});
    JammerEstimate jam;
    jam.grid_index = i_j;
    jam.angle = grid.index_to_angles(i_j);

    UplinkDesign d =
        uplink_alternating_opt(est, jam, C, shape, uniform_combiner(shape.total()));
    auto [A, B] = build_quadratic_forms(est, jam, C, 0, shape);
    arma::vec ev;
    arma::cx_mat evec;
    arma::eig_sym(ev, evec, A);
    CHECK(std::abs(arma::cdot(d.combiner, evec.col(3))) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("downlink pattern selection")
{
    AngleGrid grid;
    int i_c = grid.angles_to_index(AngleDeg(0.0, 90.0));
    int i_j = grid.angles_to_index(AngleDeg(30.0, 60.0));
    ControllerEstimate est = stub_estimate({i_c}, {grid.index_to_angles(i_c)}, arma::vec{1.0});
    JammerEstimate jam;
    jam.grid_index = i_j;
    jam.angle = grid.index_to_angles(i_j);

    // pattern 2 nulls the jammer while keeping signal gain: infinite ratio
    arma::mat C(4, grid.total(), arma::fill::ones);
    C(2, i_j) = 0.0;
    CHECK(downlink_pattern_select(est, jam, C) == 2);

    // identical ratios tie-break to the lowest index
    arma::mat flat(4, grid.total(), arma::fill::ones);
    CHECK(downlink_pattern_select(est, jam, flat) == 0);

    // two infinite ratios: larger numerator wins
    arma::mat C2(4, grid.total(), arma::fill::ones);
    C2(1, i_j) = 0.0;
    C2(3, i_j) = 0.0;
    C2.row(3) *= 2.0;
    C2(3, i_j) = 0.0;
    CHECK(downlink_pattern_select(est, jam, C2) == 3);
}

TEST_CASE("uplink SE evaluation")
{
    AngleGrid grid;
    PatternBankConfig cfg;
    cfg.n_p_azi = 3;
    cfg.n_p_ele = 3;
    cfg.element.hpbw_deg = 65.0;
    PatternBank bank = build_bank(cfg);
    ScenarioConfig sc;
    ChannelSet ch = draw_scenario(sc, bank, 4242);

    UplinkDesign d;
    d.pattern_index = 4;
    d.combiner = uniform_combiner(4);
    SEReport base = evaluate_uplink_se(ch, d);
    CHECK(base.se_up > 0.0);
    CHECK(base.sinr_up > 0.0);

    // combiner phase rotation leaves the SE unchanged
    UplinkDesign rotated = d;
    rotated.combiner *= std::exp(std::complex<double>(0.0, 1.234));
    CHECK(evaluate_uplink_se(ch, rotated).se_up == doctest::Approx(base.se_up).epsilon(1e-12));

    // scaling the channel up (more transmit power) raises the SE
    ChannelSet boosted = ch;
    boosted.H_C_full *= std::sqrt(2.0);
    CHECK(evaluate_uplink_se(boosted, d).se_up > base.se_up);
}

TEST_CASE("downlink SE evaluation")
{
    AngleGrid grid;
    PatternBankConfig cfg;
    cfg.n_p_azi = 3;
    cfg.n_p_ele = 3;
    cfg.element.hpbw_deg = 65.0;
    PatternBank bank = build_bank(cfg);
    ScenarioConfig sc;
    ChannelSet ch = draw_scenario(sc, bank, 777);

    DownlinkDesign d = downlink_design(ch, 4, 0.5, 4e-14);
    CHECK(d.se > 0.0);
    CHECK(arma::accu(d.powers) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d.powers.min() >= 0.0);

    // zero channel gives zero SE
    ChannelSet dead = ch;
    dead.H_C_full.zeros();
    CHECK(evaluate_downlink_se(dead, 0, 0.5, 4e-14).se_dn == 0.0);

    // rank-1 channel: single-stream allocation
    ChannelSet rank1 = ch;
    arma::cx_vec u(4, arma::fill::ones), v(2, arma::fill::ones);
    for (arma::uword p = 0; p < rank1.H_C_full.n_slices; p++)
        rank1.H_C_full.slice(p) = 1e-5 * u * v.st();
    DownlinkDesign d1 = downlink_design(rank1, 0, 0.5, 4e-14);
    CHECK(arma::accu(d1.powers > 0.0) == 1);
}

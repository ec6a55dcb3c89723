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

#include "rplink/link_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace rplink
{

std::pair<arma::cx_mat, arma::cx_mat>
build_quadratic_forms(const ControllerEstimate &est, const JammerEstimate &jam,
                      const arma::mat &C, int n, const UpaShape &uav_shape)
{
    if (est.zeta.empty())
        throw std::invalid_argument("build_quadratic_forms: empty controller estimate");

    const int n_u = uav_shape.total();
    arma::cx_mat A(n_u, n_u, arma::fill::zeros);
    for (int l = 0; l < est.l_hat(); l++)
    {
        arma::cx_vec a = steering_vector(uav_shape, est.angles[l]);
        double c = C(n, est.zeta[l]);
        A += est.alpha_hat[l] * est.alpha_hat[l] * c * c * (a * a.t());
    }
    arma::cx_vec a_j = steering_vector(uav_shape, jam.angle);
    double c_j = C(n, jam.grid_index);
    arma::cx_mat B = c_j * c_j * (a_j * a_j.t());
    return {A, B};
}

RayleighResult rayleigh_max(const arma::cx_mat &A, const arma::cx_mat &B, double eps)
{
    if (A.n_rows != A.n_cols || B.n_rows != B.n_cols || A.n_rows != B.n_rows)
        throw std::invalid_argument("rayleigh_max: matrices must be square, same size");
    if (eps <= 0.0)
        throw std::invalid_argument("rayleigh_max: diagonal load must be positive");

    const arma::uword n = A.n_rows;
    arma::cx_mat B_eps = B + eps * arma::cx_mat(arma::eye(n, n), arma::mat(n, n, arma::fill::zeros));

    arma::cx_mat L;
    if (!arma::chol(L, B_eps, "lower"))
        throw std::runtime_error("rayleigh_max: Cholesky factorization failed");

    // Whiten: A_tilde = L^-1 A L^-H, Hermitian by construction.
    arma::cx_mat M = arma::solve(arma::trimatl(L), A);
    arma::cx_mat A_tilde = arma::solve(arma::trimatl(L), M.t());
    A_tilde = 0.5 * (A_tilde + A_tilde.t());

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, A_tilde))
        throw std::runtime_error("rayleigh_max: eigendecomposition failed");

    RayleighResult r;
    r.lambda = eigval[n - 1];
    arma::cx_vec b = arma::solve(arma::trimatu(L.t()), eigvec.col(n - 1));
    r.b = b / arma::norm(b, 2);
    return r;
}

namespace
{

struct ObjectiveParts
{
    arma::mat c2_sig; // N_p x L, C^2 at the controller picks
    arma::vec c2_jam; // N_p, C^2 at the jammer pick
    std::vector<arma::cx_vec> a_sig;
    arma::cx_vec a_jam;
    arma::vec alpha_sq;
};

ObjectiveParts make_parts(const ControllerEstimate &est, const JammerEstimate &jam,
                          const arma::mat &C, const UpaShape &shape)
{
    ObjectiveParts p;
    const int n_p = static_cast<int>(C.n_rows);
    p.c2_sig.set_size(n_p, est.l_hat());
    for (int l = 0; l < est.l_hat(); l++)
    {
        p.c2_sig.col(l) = arma::square(C.col(est.zeta[l]));
        p.a_sig.push_back(steering_vector(shape, est.angles[l]));
    }
    p.c2_jam = arma::square(C.col(jam.grid_index));
    p.a_jam = steering_vector(shape, jam.angle);
    p.alpha_sq = arma::square(est.alpha_hat);
    return p;
}

// Loaded P0 objective at (n, b): the combiner gains toward each estimated
// direction weight the pattern gains; eps regularizes the denominator.
double loaded_objective(const ObjectiveParts &p, int n, const arma::cx_vec &b, double eps)
{
    double num = 0.0;
    for (std::size_t l = 0; l < p.a_sig.size(); l++)
        num += p.alpha_sq[l] * p.c2_sig(n, l) * std::norm(arma::cdot(b, p.a_sig[l]));
    double den = p.c2_jam[n] * std::norm(arma::cdot(b, p.a_jam)) + eps;
    return num / den;
}

int scan_patterns(const ObjectiveParts &p, const arma::cx_vec &b, double eps)
{
    const int n_p = static_cast<int>(p.c2_jam.n_elem);
    arma::vec w(p.a_sig.size());
    for (std::size_t l = 0; l < p.a_sig.size(); l++)
        w[l] = p.alpha_sq[l] * std::norm(arma::cdot(b, p.a_sig[l]));
    double k_jam = std::norm(arma::cdot(b, p.a_jam));

    int best = 0;
    double best_obj = -1.0;
    for (int n = 0; n < n_p; n++)
    {
        double num = arma::dot(p.c2_sig.row(n).t(), w);
        double obj = num / (k_jam * p.c2_jam[n] + eps);
        if (obj > best_obj)
        {
            best_obj = obj;
            best = n;
        }
    }
    return best;
}

} // namespace

UplinkDesign uplink_alternating_opt(const ControllerEstimate &est, const JammerEstimate &jam,
                                    const arma::mat &C, const UpaShape &uav_shape,
                                    const arma::cx_vec &init_combiner,
                                    double load_eps, double conv_eps, int max_iterations)
{
    if (est.zeta.empty())
        throw std::invalid_argument("uplink_alternating_opt: empty controller estimate");

    ObjectiveParts parts = make_parts(est, jam, C, uav_shape);

    UplinkDesign design;
    design.combiner = init_combiner / arma::norm(init_combiner, 2);
    design.pattern_index = 0;

    double prev = -arma::datum::inf;
    for (int it = 0; it < max_iterations; it++)
    {
        int n = scan_patterns(parts, design.combiner, load_eps);
        auto [A, B] = build_quadratic_forms(est, jam, C, n, uav_shape);
        arma::cx_vec b = rayleigh_max(A, B, load_eps).b;

        double obj = loaded_objective(parts, n, b, load_eps);
        if (obj < prev)
            break; // numerical convergence, keep the previous iterate

        design.pattern_index = n;
        design.combiner = b;
        design.objective_trace.push_back(obj);
        design.iterations = it + 1;
        if (obj - prev < conv_eps)
            break;
        prev = obj;
    }
    return design;
}

int downlink_pattern_select(const ControllerEstimate &est, const JammerEstimate &jam,
                            const arma::mat &C)
{
    if (est.zeta.empty())
        throw std::invalid_argument("downlink_pattern_select: empty controller estimate");

    const int n_p = static_cast<int>(C.n_rows);
    int best = 0;
    bool best_inf = false;
    double best_val = -1.0; // ratio when finite, numerator when infinite

    for (int n = 0; n < n_p; n++)
    {
        double num = 0.0;
        for (int l = 0; l < est.l_hat(); l++)
        {
            double c = C(n, est.zeta[l]);
            num += est.alpha_hat[l] * est.alpha_hat[l] * c * c;
        }
        double c_j = C(n, jam.grid_index);
        double den = c_j * c_j;

        bool inf = (den == 0.0);
        double val = inf ? num : num / den;
        bool better = best_inf == inf ? (val > best_val) : inf;
        if (better)
        {
            best = n;
            best_inf = inf;
            best_val = val;
        }
    }
    return best;
}

arma::vec water_filling(const arma::vec &eigenvalues, double noise_var,
                        double power_budget)
{
    if (noise_var <= 0.0 || power_budget <= 0.0)
        throw std::invalid_argument("water_filling: noise and budget must be positive");

    arma::vec p(eigenvalues.n_elem, arma::fill::zeros);
    arma::uvec order = arma::sort_index(eigenvalues, "descend");
    int n_pos = 0;
    for (arma::uword i = 0; i < eigenvalues.n_elem; i++)
        if (eigenvalues[order[i]] > 0.0)
            n_pos++;
    if (n_pos == 0)
        return p;

    // Largest active set whose common water level keeps every member
    // positive; the level then satisfies the budget exactly.
    for (int k = n_pos; k >= 1; k--)
    {
        double inv_sum = 0.0;
        for (int i = 0; i < k; i++)
            inv_sum += noise_var / eigenvalues[order[i]];
        double mu = (power_budget + inv_sum) / k;
        if (mu - noise_var / eigenvalues[order[k - 1]] >= 0.0)
        {
            for (int i = 0; i < k; i++)
                p[order[i]] = mu - noise_var / eigenvalues[order[i]];
            // When the noise-to-gain levels dwarf the budget, the level
            // subtraction loses digits; rescale to restore the budget.
            double total = arma::accu(p);
            if (total > 0.0)
                p *= power_budget / total;
            break;
        }
    }
    return p;
}

arma::cx_vec uniform_combiner(int n_u)
{
    return arma::cx_vec(arma::vec(n_u, arma::fill::value(1.0 / std::sqrt(double(n_u)))),
                        arma::vec(n_u, arma::fill::zeros));
}

SEReport evaluate_uplink_se(const ChannelSet &ch, const UplinkDesign &design)
{
    const int n = design.pattern_index;
    const arma::cx_mat H = ch.H_C_full.slice(n);
    arma::cx_rowvec effective = design.combiner.t() * H;

    // Matched single-stream beamformer: |b^H H f| with unit f equals the
    // effective channel norm.
    double signal = std::pow(arma::norm(effective, 2), 2);
    double jam = ch.sigma_J_sq * std::norm(arma::cdot(design.combiner, ch.h_J.col(n)));

    SEReport r;
    r.sinr_up = signal / (jam + ch.sigma_U_sq);
    r.se_up = std::log2(1.0 + r.sinr_up);
    return r;
}

DownlinkDesign downlink_design(const ChannelSet &ch, int pattern_index,
                               double power_budget, double noise_var)
{
    DownlinkDesign d;
    d.pattern_index = pattern_index;
    arma::vec sv = arma::svd(ch.downlink_slice(pattern_index));
    arma::vec lambda = arma::square(sv);
    if (lambda.max() <= 0.0)
    {
        d.powers = arma::vec(lambda.n_elem, arma::fill::zeros);
        return d;
    }
    d.powers = water_filling(lambda, noise_var, power_budget);
    for (arma::uword i = 0; i < lambda.n_elem; i++)
        d.se += std::log2(1.0 + d.powers[i] * lambda[i] / noise_var);
    return d;
}

SEReport evaluate_downlink_se(const ChannelSet &ch, int pattern_index,
                              double power_budget, double noise_var)
{
    SEReport r;
    r.se_dn = downlink_design(ch, pattern_index, power_budget, noise_var).se;
    return r;
}

} // namespace rplink

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

#include "rplink/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rplink
{

namespace
{

// Real-by-complex product without promoting the real matrix.
arma::cx_mat real_t_times_cx(const arma::mat &A, const arma::cx_mat &B)
{
    return arma::cx_mat(A.t() * arma::real(B), A.t() * arma::imag(B));
}

arma::uword argmax_abs(const arma::cx_vec &v)
{
    // Lowest index wins on ties.
    arma::uword best = 0;
    double best_val = std::abs(v[0]);
    for (arma::uword i = 1; i < v.n_elem; i++)
    {
        double val = std::abs(v[i]);
        if (val > best_val)
        {
            best_val = val;
            best = i;
        }
    }
    return best;
}

arma::mat columns_of(const arma::mat &M, const std::vector<int> &idx)
{
    arma::mat out(M.n_rows, idx.size());
    for (std::size_t k = 0; k < idx.size(); k++)
        out.col(k) = M.col(idx[k]);
    return out;
}

} // namespace

arma::cx_mat average_snapshots(const ReceivedTensor &y)
{
    const arma::cx_cube &s = y.samples;
    if (s.n_cols < 1)
        throw std::invalid_argument("average_snapshots: empty tensor");
    arma::cx_mat out(s.n_rows, s.n_slices, arma::fill::zeros);
    for (arma::uword p = 0; p < s.n_slices; p++)
        out.col(p) = arma::mean(s.slice(p), 1);
    return out;
}

ControllerEstimate omp_mmv(const arma::cx_mat &S_U, const arma::mat &C_L,
                           const arma::mat &C_N, const arma::cx_mat &Abar,
                           const AngleGrid &grid, const OmpConfig &cfg)
{
    if (cfg.eta_th <= 0.0 || cfg.eta_th >= 1.0)
        throw std::invalid_argument("OmpConfig: eta_th must be in (0, 1)");
    if (C_L.n_rows != S_U.n_cols || C_L.n_rows != C_N.n_rows || C_L.n_cols != C_N.n_cols)
        throw std::invalid_argument("omp_mmv: sensing matrix shape mismatch");
    if (Abar.n_rows != C_L.n_cols || Abar.n_cols != S_U.n_rows)
        throw std::invalid_argument("omp_mmv: grid steering matrix shape mismatch");

    ControllerEstimate est;
    const arma::cx_mat target = S_U.st(); // N_p x N_U
    const double eta0 = std::pow(arma::norm(S_U, "fro"), 2);
    if (!(eta0 > 0.0))
    {
        est.failed = true;
        return est;
    }

    arma::cx_mat residual = target;
    while (std::pow(arma::norm(residual, "fro"), 2) / eta0 > cfg.eta_th)
    {
        if (est.l_hat() >= cfg.max_paths)
        {
            est.residual_floor = true;
            break;
        }

        arma::cx_mat corr = real_t_times_cx(C_N, residual); // N_a x N_U
        arma::cx_vec gain = arma::sum(corr % arma::conj(Abar), 1);
        int pick = static_cast<int>(argmax_abs(gain));
        if (std::find(est.zeta.begin(), est.zeta.end(), pick) != est.zeta.end())
            break; // projection left nothing new to select

        est.zeta.push_back(pick);
        arma::mat sel = columns_of(C_L, est.zeta);
        residual = target - sel * (arma::pinv(sel) * target);
    }

    if (est.zeta.empty())
    {
        est.failed = true;
        return est;
    }

    for (int idx : est.zeta)
        est.angles.push_back(grid.index_to_angles(idx));

    est.G_N = arma::pinv(columns_of(C_N, est.zeta)) * target;
    est.G = arma::pinv(columns_of(C_L, est.zeta)) * target;
    est.alpha_hat = arma::mean(arma::abs(est.G), 1);
    return est;
}

ReceivedTensor subtract_controller(const ReceivedTensor &y, const ControllerEstimate &est,
                                   const arma::mat &C_L)
{
    ReceivedTensor out = y;
    if (est.zeta.empty())
        return out;

    arma::mat sel = columns_of(C_L, est.zeta);
    arma::cx_mat h_hat = (sel * est.G).st(); // N_U x N_p
    for (arma::uword p = 0; p < out.samples.n_slices; p++)
        out.samples.slice(p).each_col() -= h_hat.col(p);
    return out;
}

arma::mat jammer_magnitude(const ReceivedTensor &y_res, double sigma_U_sq,
                           double sigma_J_sq)
{
    if (sigma_J_sq <= 0.0)
        throw std::invalid_argument("jammer_magnitude: sigma_J_sq must be positive");

    const arma::cx_cube &s = y_res.samples;
    // Circular complex samples: E|y| = Sigma * sqrt(pi)/2, so the variance
    // inversion carries 4/pi. Keeps the estimator consistent.
    const double inv_mean_sq = 4.0 / arma::datum::pi;
    arma::mat out(s.n_rows, s.n_slices);
    for (arma::uword p = 0; p < s.n_slices; p++)
    {
        arma::vec m = arma::mean(arma::abs(s.slice(p)), 1);
        for (arma::uword rx = 0; rx < s.n_rows; rx++)
        {
            double radicand = m[rx] * m[rx] * inv_mean_sq - sigma_U_sq;
            out(rx, p) = std::sqrt(std::max(radicand, 0.0) / sigma_J_sq);
        }
    }
    return out;
}

JammerEstimate jammer_ml_angle(const arma::mat &Hhat_J_mag, const arma::mat &C_N,
                               const AngleGrid &grid)
{
    if (Hhat_J_mag.n_cols != C_N.n_rows)
        throw std::invalid_argument("jammer_ml_angle: shape mismatch");

    // Sum the pattern-domain correlation over antennas, then grid-argmax.
    arma::rowvec a = arma::sum(Hhat_J_mag, 0) * C_N;
    arma::uword best = 0;
    for (arma::uword i = 1; i < a.n_elem; i++)
        if (a[i] > a[best])
            best = i;

    JammerEstimate est;
    est.grid_index = static_cast<int>(best);
    est.angle = grid.index_to_angles(est.grid_index);
    est.Hhat_J_mag = Hhat_J_mag;
    return est;
}

std::vector<AngleDeg> music_baseline(const ReceivedTensor &y, int n_sources,
                                     const UpaShape &uav_shape, const AngleGrid &grid)
{
    const arma::cx_cube &s = y.samples;
    const int n_u = static_cast<int>(s.n_rows);
    if (n_sources < 1)
        throw std::invalid_argument("music_baseline: need at least one source");
    if (n_u <= n_sources)
        throw std::invalid_argument("music_baseline: requires more antennas than sources");

    arma::cx_mat R(n_u, n_u, arma::fill::zeros);
    for (arma::uword p = 0; p < s.n_slices; p++)
    {
        const arma::cx_mat slice = s.slice(p);
        R += slice * slice.t(); // .t() is the conjugate transpose
    }
    R /= static_cast<double>(s.n_cols * s.n_slices);

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, R))
        throw std::runtime_error("music_baseline: eigendecomposition failed");

    // eig_sym sorts ascending; the noise subspace spans the smallest
    // N_U - n_sources eigenvectors.
    arma::cx_mat noise = eigvec.cols(0, n_u - n_sources - 1);
    arma::cx_mat A = steering_matrix_grid(uav_shape, grid); // rows are a^T
    arma::cx_mat proj = arma::conj(A) * noise;              // rows a^H E_n
    arma::vec denom = arma::sum(arma::square(arma::abs(proj)), 1);
    arma::vec spectrum = 1.0 / arma::clamp(denom, 1e-300, arma::datum::inf);

    // Local maxima over the elevation x azimuth surface, ranked by height.
    std::vector<std::pair<double, int>> peaks;
    auto at = [&](int r, int c) { return spectrum[r * grid.n_azi + c]; };
    for (int r = 0; r < grid.n_ele; r++)
        for (int c = 0; c < grid.n_azi; c++)
        {
            double v = at(r, c);
            if (r > 0 && at(r - 1, c) > v)
                continue;
            if (r + 1 < grid.n_ele && at(r + 1, c) > v)
                continue;
            if (c > 0 && at(r, c - 1) > v)
                continue;
            if (c + 1 < grid.n_azi && at(r, c + 1) > v)
                continue;
            peaks.emplace_back(v, r * grid.n_azi + c);
        }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });

    std::vector<AngleDeg> out;
    for (const auto &[val, idx] : peaks)
    {
        out.push_back(grid.index_to_angles(idx));
        if (static_cast<int>(out.size()) == n_sources)
            break;
    }
    while (static_cast<int>(out.size()) < n_sources && !out.empty())
        out.push_back(out.back());
    if (out.empty())
        out.resize(n_sources, AngleDeg(0.0, 90.0));
    return out;
}

} // namespace rplink

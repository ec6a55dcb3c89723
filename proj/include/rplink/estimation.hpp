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

#include <vector>

#include "rplink/signal_sim.hpp"

namespace rplink
{

struct OmpConfig
{
    double eta_th = 1e-3; // relative residual energy stop threshold
    int max_paths = 3;    // cap on greedy selections
};

/// Controller sparse-recovery result. zeta holds the selected grid indices
/// in selection order; G_N / G are per-path, per-antenna complex gains
/// fitted against the column-normalized and the raw sensing matrix;
/// alpha_hat[l] is the antenna-averaged magnitude of G row l.
struct ControllerEstimate
{
    std::vector<int> zeta;
    std::vector<AngleDeg> angles;
    arma::cx_mat G_N; // L x N_U
    arma::cx_mat G;   // L x N_U
    arma::vec alpha_hat;
    bool failed = false;         // no usable signal, estimate is empty
    bool residual_floor = false; // cap hit before the residual threshold

    int l_hat() const { return static_cast<int>(zeta.size()); }
};

struct JammerEstimate
{
    AngleDeg angle;
    int grid_index = 0;
    arma::mat Hhat_J_mag; // N_U x N_p
};

/// Arithmetic mean over the snapshot dimension: S_U (N_U x N_p).
arma::cx_mat average_snapshots(const ReceivedTensor &y);

/// Greedy sparse recovery of the controller arrival directions over the
/// angle grid. Per iteration: correlate the residual with the normalized
/// sensing matrix, align per-antenna phases with the conjugated grid
/// steering matrix, sum coherently across antennas, pick the argmax, and
/// re-project the measurement off the selected raw-matrix columns.
///
/// C_L is the sensing matrix in use (raw or reconstructed), C_N its
/// column-normalized form, Abar the grid steering matrix (N_a x N_U).
ControllerEstimate omp_mmv(const arma::cx_mat &S_U, const arma::mat &C_L,
                           const arma::mat &C_N, const arma::cx_mat &Abar,
                           const AngleGrid &grid, const OmpConfig &cfg);

/// Removes the fitted controller contribution from every snapshot:
/// Y - C_L[:,zeta] * G broadcast over the snapshot dimension.
ReceivedTensor subtract_controller(const ReceivedTensor &y, const ControllerEstimate &est,
                                   const arma::mat &C_L);

/// Magnitude estimate of the jammer channel from snapshot-averaged
/// absolute values: inverts the circular-Gaussian magnitude mean
/// E|y| = Sigma sqrt(pi)/2, i.e.
/// sqrt(max(mean|Y|^2 * 4/pi - sigma_U_sq, 0) / sigma_J_sq) per entry.
arma::mat jammer_magnitude(const ReceivedTensor &y_res, double sigma_U_sq,
                           double sigma_J_sq);

/// Grid search maximizing the antenna-summed correlation of the magnitude
/// profile with the normalized sensing matrix.
JammerEstimate jammer_ml_angle(const arma::mat &Hhat_J_mag, const arma::mat &C_N,
                               const AngleGrid &grid);

/// Subspace baseline: sample covariance pooled over all snapshots and
/// patterns, noise-subspace projector, 1 degree grid search. Returns the
/// top n_sources peaks ordered by pseudo-spectrum height. Requires
/// N_U > n_sources.
std::vector<AngleDeg> music_baseline(const ReceivedTensor &y, int n_sources,
                                     const UpaShape &uav_shape, const AngleGrid &grid);

} // namespace rplink

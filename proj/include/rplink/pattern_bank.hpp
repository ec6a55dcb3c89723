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

#include <string>
#include <vector>

#include "rplink/angles.hpp"

namespace rplink
{

/// Single-element pattern parameters: quadratic dB attenuation per cut with
/// a side-lobe floor (vertical) and a front-back floor (horizontal and
/// total). The same 3 dB width is used for both cuts.
struct ElementPatternParams
{
    double hpbw_deg = 65.0;
    double sla_db = 30.0;
    double a_max_db = 30.0;
};

struct PatternBankConfig
{
    int n_p_azi = 11;
    int n_p_ele = 11;
    ElementPatternParams element;
    AngleGrid grid;

    int n_p() const { return n_p_azi * n_p_ele; }
};

/// Bank of directional radiation patterns sampled on the angle grid.
/// C holds amplitude gains (one row per pattern, one column per grid
/// direction), each row power-normalized over the sphere. C_N is C with
/// every column scaled to unit Euclidean norm.
struct PatternBank
{
    PatternBankConfig config;
    arma::mat C;
    arma::mat C_N;
    std::vector<AngleDeg> axes;
};

/// Boresight direction of pattern n_p: the elevation/azimuth lattice spans
/// the full grid in steps of round(180 / (count - 1)).
AngleDeg axis_angles(int n_p, const PatternBankConfig &cfg);

/// Linear amplitude gain of the element pattern for a direction expressed
/// in the boresight frame (boresight at elevation 0, azimuth 90).
double element_gain(const FrameAngleDeg &angle, const ElementPatternParams &p);

/// Rotates a grid direction into the frame of a pattern whose boresight
/// points at `axis`. The axis direction itself maps to (0, 90). Poles
/// resolve to azimuth 90.
FrameAngleDeg rotate_to_boresight(const AngleDeg &grid_angle, const AngleDeg &axis);

PatternBank build_bank(const PatternBankConfig &cfg);

/// Single constant-gain pattern covering the grid hemisphere, normalized
/// like the directional patterns. Used by the fixed-pattern baseline.
PatternBank build_omni_bank(const AngleGrid &grid);

/// Column-wise normalization; columns with norm below 1e-12 are left as-is.
arma::mat column_normalized(const arma::mat &C);

void save_bank(const PatternBank &bank, const std::string &path);
PatternBank load_bank(const std::string &path);

} // namespace rplink

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

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rplink/pattern_bank.hpp"

namespace rplink
{

/// Spectral thresholding config. Coefficients whose magnitude, normalized
/// to the per-pattern spectral maximum, stays above threshold_db are kept.
/// Normalized amplitudes are read on a 10 log10 scale (-30 dB keeps
/// magnitudes above 1e-3 of the peak). -inf keeps everything.
struct CodecConfig
{
    double threshold_db = -30.0;
};

struct SpectralCoeff
{
    std::uint16_t row;
    std::uint16_t col;
    std::complex<double> value;
};

struct CompressedPattern
{
    std::vector<SpectralCoeff> kept;
};

/// Sparse frequency-domain representation of a pattern bank: each pattern
/// image (n_ele x n_azi, rows are elevation) is Hamming-windowed, 2-D
/// Fourier transformed, and thresholded. The window vectors are stored so
/// reconstruction can undo the windowing.
struct CompressedBank
{
    int n_ele = 0;
    int n_azi = 0;
    double threshold_db = -30.0;
    arma::vec w_ele;
    arma::vec w_azi;
    std::vector<CompressedPattern> patterns;

    std::size_t kept_total() const;
};

struct CodecReport
{
    double nmse_db;        // 10 log10(|C_L - C|_F^2 / |C|_F^2), -250 when exact
    double ratio;          // stored records (one per coefficient) / (N_p * N_a)
    double ratio_scalars;  // stored scalars (row, col, value) / (N_p * N_a)
    double ratio_bytes;    // serialized record bytes / raw matrix bytes
    std::size_t kept;
};

/// 0.54 - 0.46 cos(2 pi n / (N - 1)); endpoints are nonzero.
arma::vec hamming_window(int n);

CompressedBank compress(const PatternBank &bank, const CodecConfig &cfg);

/// Rebuilds the dense gain matrix C_L (N_p x N_a) from the kept spectra.
arma::mat reconstruct(const CompressedBank &cb);

CodecReport nmse_and_ratio(const arma::mat &C, const arma::mat &C_L,
                           const CompressedBank &cb);

void save_compressed(const CompressedBank &cb, const std::string &path);
CompressedBank load_compressed(const std::string &path);

} // namespace rplink

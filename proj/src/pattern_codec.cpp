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

#include "rplink/pattern_codec.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace rplink
{

namespace
{

// FFTW plan creation is not thread-safe; execution with per-thread buffers
// is. Plans are cached per image size behind a mutex.
class Dft2d
{
  public:
    Dft2d(int n_rows, int n_cols) : n_rows_(n_rows), n_cols_(n_cols)
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        arma::cx_mat scratch(n_rows, n_cols);
        // FFTW uses row-major order; armadillo is column-major, so the
        // axes swap. Both dimensions transform either way.
        fwd_ = fftw_plan_dft_2d(n_cols, n_rows,
                                reinterpret_cast<fftw_complex *>(scratch.memptr()),
                                reinterpret_cast<fftw_complex *>(scratch.memptr()),
                                FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_2d(n_cols, n_rows,
                                reinterpret_cast<fftw_complex *>(scratch.memptr()),
                                reinterpret_cast<fftw_complex *>(scratch.memptr()),
                                FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (fwd_ == nullptr || bwd_ == nullptr)
            throw std::runtime_error("Dft2d: FFTW plan creation failed");
    }

    ~Dft2d()
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Dft2d(const Dft2d &) = delete;
    Dft2d &operator=(const Dft2d &) = delete;

    void forward(arma::cx_mat &inout) const
    {
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex *>(inout.memptr()),
                         reinterpret_cast<fftw_complex *>(inout.memptr()));
    }

    // Unnormalized; the caller divides by n_rows * n_cols.
    void backward(arma::cx_mat &inout) const
    {
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex *>(inout.memptr()),
                         reinterpret_cast<fftw_complex *>(inout.memptr()));
    }

  private:
    static std::mutex &plan_mutex()
    {
        static std::mutex m;
        return m;
    }

    int n_rows_, n_cols_;
    fftw_plan fwd_, bwd_;
};

} // namespace

std::size_t CompressedBank::kept_total() const
{
    std::size_t n = 0;
    for (const auto &p : patterns)
        n += p.kept.size();
    return n;
}

arma::vec hamming_window(int n)
{
    if (n < 2)
        throw std::invalid_argument("hamming_window: need at least 2 samples");
    arma::vec w(n);
    for (int i = 0; i < n; i++)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * arma::datum::pi * i / (n - 1));
    return w;
}

// The DFT convention (unnormalized forward, 1/N per dimension on the
// inverse) is private to this pair of functions; round-trip exactness is
// the contract.
CompressedBank compress(const PatternBank &bank, const CodecConfig &cfg)
{
    if (cfg.threshold_db >= 0.0)
        throw std::invalid_argument("CodecConfig: threshold must be negative");

    const int n_ele = bank.config.grid.n_ele;
    const int n_azi = bank.config.grid.n_azi;
    if (n_ele > std::numeric_limits<std::uint16_t>::max() ||
        n_azi > std::numeric_limits<std::uint16_t>::max())
        throw std::invalid_argument("compress: grid too large for record indices");

    CompressedBank cb;
    cb.n_ele = n_ele;
    cb.n_azi = n_azi;
    cb.threshold_db = cfg.threshold_db;
    cb.w_ele = hamming_window(n_ele);
    cb.w_azi = hamming_window(n_azi);
    cb.patterns.resize(bank.C.n_rows);

    const arma::mat window = cb.w_ele * cb.w_azi.t();
    const Dft2d dft(n_ele, n_azi);

#pragma omp parallel for schedule(static)
    for (arma::uword row = 0; row < bank.C.n_rows; row++)
    {
        // Row-major reshape: image rows are elevation, columns azimuth.
        arma::mat img(n_ele, n_azi);
        for (int i = 0; i < n_ele; i++)
            for (int j = 0; j < n_azi; j++)
                img(i, j) = bank.C(row, i * n_azi + j);

        arma::cx_mat spec(window % img, arma::mat(n_ele, n_azi, arma::fill::zeros));
        dft.forward(spec);
        double peak = arma::abs(spec).max();
        // Normalized spectral amplitudes are expressed as 10 log10 of the
        // magnitude ratio, so -30 dB keeps |c| > 1e-3 * peak.
        double floor_mag = (cfg.threshold_db == -std::numeric_limits<double>::infinity())
                               ? -1.0
                               : peak * std::pow(10.0, cfg.threshold_db / 10.0);

        auto &kept = cb.patterns[row].kept;
        for (int j = 0; j < n_azi; j++)
            for (int i = 0; i < n_ele; i++)
                if (std::abs(spec(i, j)) > floor_mag)
                    kept.push_back({static_cast<std::uint16_t>(i),
                                    static_cast<std::uint16_t>(j), spec(i, j)});
    }
    return cb;
}

arma::mat reconstruct(const CompressedBank &cb)
{
    const int n_ele = cb.n_ele;
    const int n_azi = cb.n_azi;
    const arma::mat window = cb.w_ele * cb.w_azi.t();
    if (window.min() <= 0.0)
        throw std::invalid_argument("reconstruct: window has non-positive entries");

    arma::mat C_L(cb.patterns.size(), static_cast<arma::uword>(n_ele) * n_azi);
    const Dft2d dft(n_ele, n_azi);
    const double scale = static_cast<double>(n_ele) * n_azi;

    for (const auto &p : cb.patterns)
        for (const auto &c : p.kept)
            if (c.row >= n_ele || c.col >= n_azi)
                throw std::invalid_argument("reconstruct: coefficient index out of range");

#pragma omp parallel for schedule(static)
    for (std::size_t row = 0; row < cb.patterns.size(); row++)
    {
        arma::cx_mat spec(n_ele, n_azi, arma::fill::zeros);
        for (const auto &c : cb.patterns[row].kept)
            spec(c.row, c.col) = c.value;
        dft.backward(spec);
        arma::mat img = (arma::real(spec) / scale) / window;

        // Grid rows at elevation +-90 index a single physical direction,
        // so their reconstructed duplicates are averaged back into one
        // value (the un-windowing is worst-conditioned exactly there).
        if (n_azi > 1)
        {
            img.row(0).fill(arma::mean(img.row(0)));
            if (n_ele == 181)
                img.row(n_ele - 1).fill(arma::mean(img.row(n_ele - 1)));
        }

        for (int i = 0; i < n_ele; i++)
            for (int j = 0; j < n_azi; j++)
                C_L(row, static_cast<arma::uword>(i) * n_azi + j) = img(i, j);
    }
    return C_L;
}

CodecReport nmse_and_ratio(const arma::mat &C, const arma::mat &C_L,
                           const CompressedBank &cb)
{
    if (C.n_rows != C_L.n_rows || C.n_cols != C_L.n_cols)
        throw std::invalid_argument("nmse_and_ratio: shape mismatch");

    CodecReport r{};
    r.kept = cb.kept_total();

    double err = arma::accu(arma::square(C_L - C));
    double ref = arma::accu(arma::square(C));
    if (err <= 0.0 || ref <= 0.0)
        r.nmse_db = -250.0;
    else
        r.nmse_db = std::max(10.0 * std::log10(err / ref), -250.0);

    double total = static_cast<double>(C.n_rows) * static_cast<double>(C.n_cols);
    r.ratio = static_cast<double>(r.kept) / total;
    r.ratio_scalars = 3.0 * static_cast<double>(r.kept) / total;
    // Serialized record: u16 row + u16 col + complex128 = 20 bytes vs 8.
    r.ratio_bytes = 20.0 * static_cast<double>(r.kept) / (8.0 * total);
    return r;
}

// Compressed-bank file layout (little-endian): magic "RPLCODC1", int32
// n_p, n_ele, n_azi, float64 threshold_db, then per pattern an int64 count
// followed by records (u16 row, u16 col, f64 re, f64 im).
void save_compressed(const CompressedBank &cb, const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("save_compressed: cannot open " + path);

    f.write("RPLCODC1", 8);
    int32_t dims[3] = {static_cast<int32_t>(cb.patterns.size()), cb.n_ele, cb.n_azi};
    f.write(reinterpret_cast<const char *>(dims), sizeof(dims));
    f.write(reinterpret_cast<const char *>(&cb.threshold_db), sizeof(double));

    for (const auto &p : cb.patterns)
    {
        int64_t count = static_cast<int64_t>(p.kept.size());
        f.write(reinterpret_cast<const char *>(&count), sizeof(count));
        for (const auto &c : p.kept)
        {
            double re = c.value.real(), im = c.value.imag();
            f.write(reinterpret_cast<const char *>(&c.row), sizeof(c.row));
            f.write(reinterpret_cast<const char *>(&c.col), sizeof(c.col));
            f.write(reinterpret_cast<const char *>(&re), sizeof(re));
            f.write(reinterpret_cast<const char *>(&im), sizeof(im));
        }
    }
    if (!f)
        throw std::runtime_error("save_compressed: write failed for " + path);
}

CompressedBank load_compressed(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("load_compressed: cannot open " + path);

    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "RPLCODC1")
        throw std::runtime_error("load_compressed: bad magic in " + path);

    int32_t dims[3];
    f.read(reinterpret_cast<char *>(dims), sizeof(dims));
    CompressedBank cb;
    f.read(reinterpret_cast<char *>(&cb.threshold_db), sizeof(double));
    if (!f || dims[0] < 1 || dims[1] < 2 || dims[2] < 2)
        throw std::runtime_error("load_compressed: corrupt header in " + path);

    cb.n_ele = dims[1];
    cb.n_azi = dims[2];
    cb.w_ele = hamming_window(cb.n_ele);
    cb.w_azi = hamming_window(cb.n_azi);
    cb.patterns.resize(dims[0]);

    for (auto &p : cb.patterns)
    {
        int64_t count = 0;
        f.read(reinterpret_cast<char *>(&count), sizeof(count));
        if (!f || count < 0 || count > int64_t(cb.n_ele) * cb.n_azi)
            throw std::runtime_error("load_compressed: corrupt record count in " + path);
        p.kept.resize(count);
        for (auto &c : p.kept)
        {
            double re, im;
            f.read(reinterpret_cast<char *>(&c.row), sizeof(c.row));
            f.read(reinterpret_cast<char *>(&c.col), sizeof(c.col));
            f.read(reinterpret_cast<char *>(&re), sizeof(re));
            f.read(reinterpret_cast<char *>(&im), sizeof(im));
            if (c.row >= cb.n_ele || c.col >= cb.n_azi)
                throw std::runtime_error("load_compressed: record index out of range in " + path);
            c.value = {re, im};
        }
    }
    if (!f)
        throw std::runtime_error("load_compressed: truncated file " + path);
    return cb;
}

} // namespace rplink

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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rplink/montecarlo.hpp"

namespace py = pybind11;
using namespace rplink;

namespace
{

arma::mat np_to_mat(const py::array_t<double, py::array::c_style | py::array::forcecast> &a)
{
    if (a.ndim() != 2)
        throw std::invalid_argument("expected a 2-d float array");
    arma::mat m(a.shape(0), a.shape(1));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); i++)
        for (py::ssize_t j = 0; j < a.shape(1); j++)
            m(i, j) = r(i, j);
    return m;
}

arma::cx_mat np_to_cx_mat(
    const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> &a)
{
    if (a.ndim() != 2)
        throw std::invalid_argument("expected a 2-d complex array");
    arma::cx_mat m(a.shape(0), a.shape(1));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); i++)
        for (py::ssize_t j = 0; j < a.shape(1); j++)
            m(i, j) = r(i, j);
    return m;
}

py::array_t<double> mat_to_np(const arma::mat &m)
{
    py::array_t<double> a({m.n_rows, m.n_cols});
    auto w = a.mutable_unchecked<2>();
    for (arma::uword i = 0; i < m.n_rows; i++)
        for (arma::uword j = 0; j < m.n_cols; j++)
            w(i, j) = m(i, j);
    return a;
}

py::array_t<std::complex<double>> cx_mat_to_np(const arma::cx_mat &m)
{
    py::array_t<std::complex<double>> a({m.n_rows, m.n_cols});
    auto w = a.mutable_unchecked<2>();
    for (arma::uword i = 0; i < m.n_rows; i++)
        for (arma::uword j = 0; j < m.n_cols; j++)
            w(i, j) = m(i, j);
    return a;
}

py::array_t<double> vec_to_np(const arma::vec &v)
{
    py::array_t<double> a(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.n_elem)});
    double *dst = a.mutable_data();
    for (arma::uword i = 0; i < v.n_elem; i++)
        dst[i] = v[i];
    return a;
}

// Reuses the config-file key set so python dicts and text configs stay in
// sync by construction.
RunConfig config_from_dict(const py::dict &d)
{
    RunConfig cfg;
    for (const auto &item : d)
    {
        std::string key = py::cast<std::string>(item.first);
        std::string value;
        if (py::isinstance<py::bool_>(item.second))
            value = py::cast<bool>(item.second) ? "true" : "false";
        else
        {
            std::ostringstream os;
            os.precision(17);
            if (py::isinstance<py::float_>(item.second))
                os << py::cast<double>(item.second);
            else if (py::isinstance<py::int_>(item.second))
                os << py::cast<long long>(item.second);
            else
                os << py::cast<std::string>(item.second);
            value = os.str();
        }
        apply_config_key(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

PatternBank bank_from_array(const arma::mat &C, int n_a_ele, int n_a_azi)
{
    if (C.n_cols != arma::uword(n_a_ele) * n_a_azi)
        throw std::invalid_argument("bank matrix width must equal n_a_ele * n_a_azi");
    PatternBank bank;
    bank.config.n_p_azi = 1;
    bank.config.n_p_ele = static_cast<int>(C.n_rows);
    bank.config.grid.n_ele = n_a_ele;
    bank.config.grid.n_azi = n_a_azi;
    bank.C = C;
    bank.C_N = column_normalized(C);
    return bank;
}

py::dict record_to_dict(const TrialRecord &r)
{
    py::dict d;
    d["seed"] = r.seed;
    py::list true_c;
    for (const AngleDeg &a : r.true_controller)
        true_c.append(py::make_tuple(a.elevation_deg, a.azimuth_deg));
    d["true_controller"] = true_c;
    d["est_controller_el"] = r.est_controller_el;
    d["est_controller_az"] = r.est_controller_az;
    d["true_jammer"] = py::make_tuple(r.true_jammer.elevation_deg, r.true_jammer.azimuth_deg);
    d["est_jammer"] = py::make_tuple(r.est_jammer_el, r.est_jammer_az);
    d["xi_c_deg"] = r.xi_c;
    d["xi_j_deg"] = r.xi_j;
    d["se_up"] = r.se_up;
    d["se_dn"] = r.se_dn;
    d["pattern_up"] = r.pattern_up;
    d["pattern_dn"] = r.pattern_dn;
    d["iterations"] = r.iterations;
    d["flags"] = r.flags;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "link-level simulation of pattern-reconfigurable antenna arrays "
              "under directional jamming";

    m.def(
        "build_bank",
        [](int n_p_azi, int n_p_ele, double hpbw_deg, double sla_db, double a_max_db,
           int n_a_azi, int n_a_ele) {
            PatternBankConfig cfg;
            cfg.n_p_azi = n_p_azi;
            cfg.n_p_ele = n_p_ele;
            cfg.element = {hpbw_deg, sla_db, a_max_db};
            cfg.grid = {n_a_azi, n_a_ele};
            PatternBank bank = build_bank(cfg);
            py::dict d;
            d["C"] = mat_to_np(bank.C);
            d["C_N"] = mat_to_np(bank.C_N);
            py::list axes;
            for (const AngleDeg &a : bank.axes)
                axes.append(py::make_tuple(a.elevation_deg, a.azimuth_deg));
            d["axes"] = axes;
            return d;
        },
        py::arg("n_p_azi"), py::arg("n_p_ele"), py::arg("hpbw_deg"),
        py::arg("sla_db") = 30.0, py::arg("a_max_db") = 30.0, py::arg("n_a_azi") = 181,
        py::arg("n_a_ele") = 181,
        "Build the directional pattern bank; C rows are patterns over the "
        "elevation x azimuth grid.");

    m.def(
        "steering_vector",
        [](int n_azi, int n_ele, double el_deg, double az_deg) {
            arma::cx_vec v = steering_vector(UpaShape{n_azi, n_ele}, AngleDeg(el_deg, az_deg));
            return cx_mat_to_np(arma::cx_mat(v));
        },
        py::arg("n_azi"), py::arg("n_ele"), py::arg("el_deg"), py::arg("az_deg"));

    m.def(
        "compress_reconstruct",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast> &C,
           int n_a_ele, int n_a_azi, double threshold_db) {
            PatternBank bank = bank_from_array(np_to_mat(C), n_a_ele, n_a_azi);
            CompressedBank cb = compress(bank, CodecConfig{threshold_db});
            arma::mat c_l = reconstruct(cb);
            CodecReport rep = nmse_and_ratio(bank.C, c_l, cb);
            py::dict d;
            d["C_L"] = mat_to_np(c_l);
            d["nmse_db"] = rep.nmse_db;
            d["ratio"] = rep.ratio;
            d["ratio_scalars"] = rep.ratio_scalars;
            d["ratio_bytes"] = rep.ratio_bytes;
            d["kept"] = rep.kept;
            return d;
        },
        py::arg("C"), py::arg("n_a_ele"), py::arg("n_a_azi"), py::arg("threshold_db") = -30.0,
        "Window, transform, threshold and reconstruct a gain matrix; reports "
        "NMSE and storage ratios.");

    m.def(
        "estimate_controller",
        [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>
               &S_U,
           const py::array_t<double, py::array::c_style | py::array::forcecast> &C_L,
           int n_u_azi, int n_u_ele, int n_a_azi, int n_a_ele, double eta_th, int max_paths) {
            arma::mat c_l = np_to_mat(C_L);
            arma::mat c_n = column_normalized(c_l);
            AngleGrid grid{n_a_azi, n_a_ele};
            UpaShape shape{n_u_azi, n_u_ele};
            ControllerEstimate est = omp_mmv(np_to_cx_mat(S_U), c_l, c_n,
                                             steering_matrix_grid(shape, grid), grid,
                                             OmpConfig{eta_th, max_paths});
            py::dict d;
            d["zeta"] = est.zeta;
            py::list angles;
            for (const AngleDeg &a : est.angles)
                angles.append(py::make_tuple(a.elevation_deg, a.azimuth_deg));
            d["angles"] = angles;
            d["alpha_hat"] = vec_to_np(est.alpha_hat);
            d["G"] = cx_mat_to_np(est.G);
            d["failed"] = est.failed;
            d["residual_floor"] = est.residual_floor;
            return d;
        },
        py::arg("S_U"), py::arg("C_L"), py::arg("n_u_azi"), py::arg("n_u_ele"),
        py::arg("n_a_azi") = 181, py::arg("n_a_ele") = 181, py::arg("eta_th") = 1e-3,
        py::arg("max_paths") = 3,
        "Greedy sparse recovery of arrival directions from per-pattern "
        "snapshot averages.");

    m.def(
        "jammer_angle",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast> &Hhat_mag,
           const py::array_t<double, py::array::c_style | py::array::forcecast> &C_N,
           int n_a_azi, int n_a_ele) {
            AngleGrid grid{n_a_azi, n_a_ele};
            JammerEstimate est = jammer_ml_angle(np_to_mat(Hhat_mag), np_to_mat(C_N), grid);
            return py::make_tuple(est.angle.elevation_deg, est.angle.azimuth_deg,
                                  est.grid_index);
        },
        py::arg("Hhat_mag"), py::arg("C_N"), py::arg("n_a_azi") = 181,
        py::arg("n_a_ele") = 181);

    m.def(
        "rayleigh_max",
        [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>
               &A,
           const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>
               &B,
           double eps) {
            RayleighResult r = rayleigh_max(np_to_cx_mat(A), np_to_cx_mat(B), eps);
            return py::make_tuple(cx_mat_to_np(arma::cx_mat(r.b)), r.lambda);
        },
        py::arg("A"), py::arg("B"), py::arg("eps") = 1e-8,
        "Dominant generalized eigenpair of (A, B + eps I).");

    m.def(
        "water_filling",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast> &eig,
           double noise_var, double budget) {
            auto r = eig.unchecked<1>();
            arma::vec lam(eig.shape(0));
            for (py::ssize_t i = 0; i < eig.shape(0); i++)
                lam[i] = r(i);
            return vec_to_np(water_filling(lam, noise_var, budget));
        },
        py::arg("eigenvalues"), py::arg("noise_var"), py::arg("power_budget"));

    m.def(
        "run_trial",
        [](const py::dict &config, std::uint64_t seed) {
            TrialContext ctx = make_context(config_from_dict(config));
            return record_to_dict(run_trial(ctx, seed));
        },
        py::arg("config"), py::arg("seed"),
        "One end-to-end trial (bank, channel, snapshots, estimation, link "
        "design, SE) from a config dict using the config-file key names.");

    m.def(
        "run_montecarlo",
        [](const py::dict &config, const std::string &out_dir) {
            SummaryReport rep = run_montecarlo(config_from_dict(config), out_dir);
            py::dict d;
            d["trials"] = rep.trials;
            py::dict metrics;
            for (const auto &[name, ms] : rep.metrics)
            {
                py::dict one;
                one["count"] = ms.count;
                one["mean"] = ms.mean;
                one["variance"] = ms.variance;
                py::list cdf;
                for (const auto &[knot, frac] : ms.cdf)
                    cdf.append(py::make_tuple(knot, frac));
                one["cdf"] = cdf;
                metrics[py::str(name)] = one;
            }
            d["metrics"] = metrics;
            return d;
        },
        py::arg("config"), py::arg("out_dir") = std::string(),
        "Seeded Monte Carlo run; optionally writes the trials CSV and "
        "summary under out_dir.");
}

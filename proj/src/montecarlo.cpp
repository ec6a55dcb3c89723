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

#include "rplink/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rplink/rng.hpp"

namespace rplink
{

namespace
{

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double round_deg(double x)
{
    return static_cast<double>(std::lround(x));
}

double xi_error(const AngleDeg &truth, double est_el, double est_az)
{
    return std::max(std::abs(round_deg(truth.azimuth_deg) - est_az),
                    std::abs(round_deg(truth.elevation_deg) - est_el));
}

// Sentinel for inapplicable estimators: the largest error the grid allows
// for this true direction (no 90 degree cap).
double worst_case_xi(const AngleDeg &truth)
{
    double az = round_deg(truth.azimuth_deg);
    double el = round_deg(truth.elevation_deg);
    return std::max(std::max(az, 180.0 - az), std::max(el + 90.0, 90.0 - el));
}

std::size_t dominant_true_path(const std::vector<PathSpec> &paths)
{
    std::size_t best = 0;
    for (std::size_t l = 1; l < paths.size(); l++)
        if (paths[l].alpha > paths[best].alpha)
            best = l;
    return best;
}

} // namespace

TrialContext make_context(const RunConfig &cfg)
{
    cfg.validate();

    TrialContext ctx;
    ctx.cfg = cfg;
    if (cfg.estimator == Estimator::Omni)
        ctx.bank = build_omni_bank(cfg.bank.grid);
    else
        ctx.bank = build_bank(cfg.bank);

    if (cfg.estimator != Estimator::Omni)
    {
        if (cfg.use_compressed)
        {
            CompressedBank cb = compress(ctx.bank, cfg.codec);
            ctx.sensing = reconstruct(cb);
            ctx.sensing_norm = column_normalized(ctx.sensing);
        }
        else
        {
            ctx.sensing = ctx.bank.C;
            ctx.sensing_norm = ctx.bank.C_N;
        }
        ctx.grid_steering = steering_matrix_grid(cfg.scenario.uav_shape, cfg.bank.grid);
    }

    ctx.downlink_budget_w = cfg.downlink_budget_watt();
    ctx.downlink_noise_var =
        dbm_to_watt(cfg.scenario.noise_psd_dbm_hz) * cfg.scenario.rx_bandwidth_hz;
    return ctx;
}

TrialRecord run_trial(const TrialContext &ctx, std::uint64_t seed)
{
    const RunConfig &cfg = ctx.cfg;
    const AngleGrid &grid = ctx.bank.config.grid;
    const UpaShape &shape = cfg.scenario.uav_shape;

    TrialRecord rec;
    rec.seed = seed;

    ChannelSet ch = draw_scenario(cfg.scenario, ctx.bank, seed_mix(seed, 0));
    rec.true_controller.reserve(ch.controller_paths.size());
    for (const PathSpec &p : ch.controller_paths)
        rec.true_controller.push_back(p.rx_angle);
    rec.true_jammer = ch.jammer_paths.front().rx_angle;
    rec.est_controller_el.assign(ch.controller_paths.size(), arma::datum::nan);
    rec.est_controller_az.assign(ch.controller_paths.size(), arma::datum::nan);

    const std::size_t l_bar = dominant_true_path(ch.controller_paths);

    if (cfg.estimator == Estimator::Omni)
    {
        UplinkDesign design;
        design.pattern_index = 0;
        design.combiner = uniform_combiner(shape.total());
        rec.se_up = evaluate_uplink_se(ch, design).se_up;
        rec.se_dn = evaluate_downlink_se(ch, 0, ctx.downlink_budget_w, ctx.downlink_noise_var).se_dn;
        rec.pattern_up = 0;
        rec.pattern_dn = 0;
        rec.flags = "omni";
        return rec;
    }

    ControllerEstimate est;
    JammerEstimate jam;
    bool have_estimate = false;

    if (cfg.estimator == Estimator::Oracle)
    {
        for (const PathSpec &p : ch.controller_paths)
        {
            int idx = grid.nearest_index(p.rx_angle);
            est.zeta.push_back(idx);
            est.angles.push_back(grid.index_to_angles(idx));
        }
        est.alpha_hat.set_size(est.zeta.size());
        for (std::size_t l = 0; l < ch.controller_paths.size(); l++)
            est.alpha_hat[l] = ch.controller_paths[l].alpha;
        jam.grid_index = grid.nearest_index(ch.jammer_paths.front().rx_angle);
        jam.angle = grid.index_to_angles(jam.grid_index);
        have_estimate = true;
    }
    else
    {
        HopSchedule schedule;
        schedule.n_p = static_cast<int>(ctx.bank.C.n_rows);
        schedule.n_h = schedule.n_p;
        ReceivedTensor y = simulate_uplink_rx(ch, schedule, cfg.n_s, seed_mix(seed, 1));
        arma::cx_mat s_u = average_snapshots(y);

        if (cfg.estimator == Estimator::OmpMmv)
        {
            est = omp_mmv(s_u, ctx.sensing, ctx.sensing_norm, ctx.grid_steering, grid, cfg.omp);
            if (est.failed)
            {
                rec.flags = "empty_estimate";
            }
            else
            {
                have_estimate = true;
                if (est.residual_floor)
                    rec.flags = "ok+floor";
                ReceivedTensor y_res = subtract_controller(y, est, ctx.sensing);
                arma::mat h_mag = jammer_magnitude(y_res, ch.sigma_U_sq, ch.sigma_J_sq);
                jam = jammer_ml_angle(h_mag, ctx.sensing_norm, grid);
            }
        }
        else // MUSIC
        {
            int n_sources = static_cast<int>(ch.controller_paths.size() + ch.jammer_paths.size());
            if (shape.total() <= n_sources)
            {
                rec.flags = "music_na";
                rec.xi_c = worst_case_xi(ch.controller_paths[l_bar].rx_angle);
                rec.xi_j = worst_case_xi(rec.true_jammer);
                return rec;
            }
            std::vector<AngleDeg> peaks = music_baseline(y, n_sources, shape, grid);

            // The jammer dominates the received power, so the strongest
            // peak is assigned to it; the rest are controller paths.
            jam.grid_index = grid.angles_to_index(peaks[0]);
            jam.angle = peaks[0];
            for (std::size_t k = 1; k < peaks.size(); k++)
            {
                est.zeta.push_back(grid.angles_to_index(peaks[k]));
                est.angles.push_back(peaks[k]);
            }
            // Per-path gains refit by least squares at the picked columns.
            arma::mat sel(ctx.sensing.n_rows, est.zeta.size());
            for (std::size_t k = 0; k < est.zeta.size(); k++)
                sel.col(k) = ctx.sensing.col(est.zeta[k]);
            est.G = arma::pinv(sel) * s_u.st();
            est.G_N = est.G;
            est.alpha_hat = arma::mean(arma::abs(est.G), 1);
            have_estimate = true;
        }
    }

    if (have_estimate)
    {
        arma::uword l_tilde = est.alpha_hat.index_max();
        for (std::size_t l = 0; l < est.angles.size() && l < rec.true_controller.size(); l++)
        {
            rec.est_controller_el[l] = est.angles[l].elevation_deg;
            rec.est_controller_az[l] = est.angles[l].azimuth_deg;
        }
        rec.est_jammer_el = jam.angle.elevation_deg;
        rec.est_jammer_az = jam.angle.azimuth_deg;
        rec.xi_c = xi_error(ch.controller_paths[l_bar].rx_angle,
                            est.angles[l_tilde].elevation_deg,
                            est.angles[l_tilde].azimuth_deg);
        rec.xi_j = xi_error(rec.true_jammer, jam.angle.elevation_deg, jam.angle.azimuth_deg);

        const arma::mat &design_matrix =
            (cfg.estimator == Estimator::Oracle) ? ctx.bank.C : ctx.sensing;
        UplinkDesign design = uplink_alternating_opt(est, jam, design_matrix, shape,
                                                     uniform_combiner(shape.total()));
        rec.pattern_up = design.pattern_index;
        rec.iterations = design.iterations;
        rec.objective_trace = design.objective_trace;
        rec.se_up = evaluate_uplink_se(ch, design).se_up;

        rec.pattern_dn = downlink_pattern_select(est, jam, design_matrix);
        rec.se_dn = evaluate_downlink_se(ch, rec.pattern_dn, ctx.downlink_budget_w,
                                         ctx.downlink_noise_var)
                        .se_dn;
    }
    return rec;
}

std::vector<TrialRecord> run_trials(const TrialContext &ctx)
{
    const int trials = ctx.cfg.trials;
    std::vector<TrialRecord> records(trials);

    int threads = ctx.cfg.threads;
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, trials));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;)
        {
            int i = next.fetch_add(1);
            if (i >= trials)
                return;
            records[i] = run_trial(ctx, ctx.cfg.base_seed + static_cast<std::uint64_t>(i));
        }
    };

    if (threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; t++)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    return records;
}

namespace
{

MetricSummary make_metric(std::vector<double> values, double knot_step, double knot_max)
{
    MetricSummary m;
    std::vector<double> v;
    for (double x : values)
        if (std::isfinite(x))
            v.push_back(x);
    m.count = static_cast<long>(v.size());
    if (v.empty())
        return m;

    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= v.size();
    double var = 0.0;
    for (double x : v)
        var += (x - mean) * (x - mean);
    m.mean = mean;
    m.variance = v.size() > 1 ? var / (v.size() - 1) : 0.0;

    double hi = *std::max_element(v.begin(), v.end());
    hi = std::min(std::ceil(hi / knot_step) * knot_step, knot_max);
    for (double knot = 0.0; knot <= hi + 1e-12; knot += knot_step)
    {
        long n_le = 0;
        for (double x : v)
            if (x <= knot + 1e-12)
                n_le++;
        m.cdf.emplace_back(knot, static_cast<double>(n_le) / v.size());
    }
    return m;
}

} // namespace

SummaryReport summarize(const std::vector<TrialRecord> &records)
{
    SummaryReport rep;
    rep.trials = static_cast<long>(records.size());

    std::vector<double> xc, xj, su, sd, it;
    for (const TrialRecord &r : records)
    {
        xc.push_back(r.xi_c);
        xj.push_back(r.xi_j);
        su.push_back(r.se_up);
        sd.push_back(r.se_dn);
        it.push_back(r.iterations > 0 ? r.iterations : arma::datum::nan);
    }
    rep.metrics["xi_C_deg"] = make_metric(xc, 1.0, 360.0);
    rep.metrics["xi_J_deg"] = make_metric(xj, 1.0, 360.0);
    rep.metrics["se_up"] = make_metric(su, 1.0, 100.0);
    rep.metrics["se_dn"] = make_metric(sd, 1.0, 100.0);
    rep.metrics["iters"] = make_metric(it, 1.0, 100.0);
    return rep;
}

void write_trials_csv(std::ostream &out, const std::vector<TrialRecord> &records,
                      int n_paths)
{
    out << "# rplink-trials-v1\n";
    out << "seed";
    auto path_cols = [&](const std::string &base) {
        if (n_paths == 1)
            out << "," << base << "_el_C," << base << "_az_C";
        else
            for (int l = 0; l < n_paths; l++)
                out << "," << base << "_el_C_" << l << "," << base << "_az_C_" << l;
    };
    path_cols("true");
    path_cols("est");
    out << ",true_el_J,true_az_J,est_el_J,est_az_J,xi_C_deg,xi_J_deg,se_up,se_dn,"
           "pattern_up,pattern_dn,iters,flags\n";

    for (const TrialRecord &r : records)
    {
        out << r.seed;
        for (int l = 0; l < n_paths; l++)
        {
            if (l < static_cast<int>(r.true_controller.size()))
                out << "," << fmt(r.true_controller[l].elevation_deg) << ","
                    << fmt(r.true_controller[l].azimuth_deg);
            else
                out << ",nan,nan";
        }
        for (int l = 0; l < n_paths; l++)
        {
            double el = l < static_cast<int>(r.est_controller_el.size())
                            ? r.est_controller_el[l]
                            : arma::datum::nan;
            double az = l < static_cast<int>(r.est_controller_az.size())
                            ? r.est_controller_az[l]
                            : arma::datum::nan;
            out << "," << fmt(el) << "," << fmt(az);
        }
        out << "," << fmt(r.true_jammer.elevation_deg) << "," << fmt(r.true_jammer.azimuth_deg)
            << "," << fmt(r.est_jammer_el) << "," << fmt(r.est_jammer_az) << ","
            << fmt(r.xi_c) << "," << fmt(r.xi_j) << "," << fmt(r.se_up) << ","
            << fmt(r.se_dn) << "," << r.pattern_up << "," << r.pattern_dn << ","
            << r.iterations << "," << r.flags << "\n";
    }
}

void write_summary(std::ostream &out, const SummaryReport &report)
{
    out << "# rplink-summary-v1\n";
    out << "trials," << report.trials << "\n";
    out << "metric,count,mean,variance\n";
    for (const auto &[name, m] : report.metrics)
        out << name << "," << m.count << "," << fmt(m.mean) << "," << fmt(m.variance) << "\n";
    for (const auto &[name, m] : report.metrics)
        for (const auto &[knot, frac] : m.cdf)
            out << "cdf," << name << "," << fmt(knot) << "," << fmt(frac) << "\n";
}

std::vector<TrialRecord> read_trials_csv(std::istream &in)
{
    std::vector<TrialRecord> records;
    std::string line;
    std::vector<std::string> header;

    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
            out.push_back(tok);
        return out;
    };

    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        if (header.empty())
        {
            header = split(line);
            continue;
        }
        std::vector<std::string> cells = split(line);
        if (cells.size() != header.size())
            throw std::runtime_error("trials csv: row width mismatch");

        TrialRecord r;
        for (std::size_t i = 0; i < header.size(); i++)
        {
            const std::string &h = header[i];
            if (h == "seed")
                r.seed = std::strtoull(cells[i].c_str(), nullptr, 10);
            else if (h == "xi_C_deg")
                r.xi_c = std::strtod(cells[i].c_str(), nullptr);
            else if (h == "xi_J_deg")
                r.xi_j = std::strtod(cells[i].c_str(), nullptr);
            else if (h == "se_up")
                r.se_up = std::strtod(cells[i].c_str(), nullptr);
            else if (h == "se_dn")
                r.se_dn = std::strtod(cells[i].c_str(), nullptr);
            else if (h == "iters")
                r.iterations = std::atoi(cells[i].c_str());
            else if (h == "flags")
                r.flags = cells[i];
        }
        records.push_back(std::move(r));
    }
    if (header.empty())
        throw std::runtime_error("trials csv: missing header");
    return records;
}

SummaryReport run_montecarlo(const RunConfig &cfg, const std::string &out_dir)
{
    TrialContext ctx = make_context(cfg);
    std::vector<TrialRecord> records = run_trials(ctx);
    SummaryReport report = summarize(records);

    if (!out_dir.empty())
    {
        std::filesystem::create_directories(out_dir);
        std::filesystem::path base = std::filesystem::path(out_dir) / cfg.output_prefix;

        std::ofstream csv(base.string() + ".csv");
        if (!csv)
            throw std::runtime_error("run_montecarlo: cannot write " + base.string() + ".csv");
        write_trials_csv(csv, records, static_cast<int>(cfg.scenario.controller_paths.size()));

        std::ofstream sum(base.string() + "_summary.csv");
        if (!sum)
            throw std::runtime_error("run_montecarlo: cannot write " + base.string() +
                                     "_summary.csv");
        write_summary(sum, report);
    }
    return report;
}

} // namespace rplink

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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rplink/montecarlo.hpp"

using namespace rplink;

namespace
{

RunConfig load_base_config(const std::string &config_path)
{
    if (config_path.empty())
        return RunConfig{};
    return load_run_config(config_path);
}

void print_summary(const SummaryReport &rep)
{
    std::printf("%-10s %8s %12s %12s\n", "metric", "count", "mean", "variance");
    for (const auto &[name, m] : rep.metrics)
        std::printf("%-10s %8ld %12.4g %12.4g\n", name.c_str(), m.count, m.mean, m.variance);
}

int cmd_bank(const std::string &config, double hpbw, const std::string &np,
             const std::string &out)
{
    RunConfig cfg = load_base_config(config);
    if (hpbw > 0.0)
        cfg.bank.element.hpbw_deg = hpbw;
    if (!np.empty())
    {
        auto x = np.find('x');
        if (x == std::string::npos)
            throw CLI::ValidationError("--np", "expected <azi>x<ele>, e.g. 7x7");
        cfg.bank.n_p_azi = std::stoi(np.substr(0, x));
        cfg.bank.n_p_ele = std::stoi(np.substr(x + 1));
    }
    PatternBank bank = build_bank(cfg.bank);
    save_bank(bank, out);
    std::printf("bank: %d x %d patterns, hpbw %.1f deg, grid %d x %d -> %s\n",
                bank.config.n_p_azi, bank.config.n_p_ele, bank.config.element.hpbw_deg,
                bank.config.grid.n_ele, bank.config.grid.n_azi, out.c_str());
    return 0;
}

int cmd_codec(const std::string &bank_path, double threshold, const std::string &out)
{
    PatternBank bank = load_bank(bank_path);
    CompressedBank cb = compress(bank, CodecConfig{threshold});
    arma::mat c_l = reconstruct(cb);
    CodecReport rep = nmse_and_ratio(bank.C, c_l, cb);

    std::printf("%-12s %10s %10s %12s %12s %12s\n", "hpbw", "threshold", "nmse_db",
                "ratio", "ratio_scal", "ratio_bytes");
    std::printf("%-12.1f %10.1f %10.2f %11.2f%% %11.2f%% %11.2f%%\n",
                bank.config.element.hpbw_deg, threshold, rep.nmse_db, 100.0 * rep.ratio,
                100.0 * rep.ratio_scalars, 100.0 * rep.ratio_bytes);
    if (!out.empty())
    {
        save_compressed(cb, out);
        std::printf("compressed bank -> %s\n", out.c_str());
    }
    return 0;
}

int cmd_run(const std::string &config, std::uint64_t seed, bool seed_set,
            const std::string &out_dir, int threads)
{
    RunConfig cfg = load_base_config(config);
    if (seed_set)
        cfg.base_seed = seed;
    if (threads > 0)
        cfg.threads = threads;
    SummaryReport rep = run_montecarlo(cfg, out_dir);
    print_summary(rep);
    std::printf("trials csv -> %s/%s.csv\n", out_dir.c_str(), cfg.output_prefix.c_str());
    return 0;
}

int cmd_sweep(const std::string &config, const std::string &param,
              const std::string &values, std::uint64_t seed, bool seed_set,
              const std::string &out_dir, int threads)
{
    std::vector<std::string> points;
    std::stringstream ss(values);
    std::string tok;
    while (std::getline(ss, tok, ','))
        points.push_back(tok);
    if (points.empty())
        throw CLI::ValidationError("--values", "need at least one value");

    for (const std::string &value : points)
    {
        RunConfig cfg = load_base_config(config);
        if (seed_set)
            cfg.base_seed = seed;
        if (threads > 0)
            cfg.threads = threads;

        if (param == "hpbw")
            apply_config_key(cfg, "hpbw_deg", value);
        else if (param == "n_p")
        {
            apply_config_key(cfg, "n_p_azi", value);
            apply_config_key(cfg, "n_p_ele", value);
        }
        else if (param == "p_c_dbm")
            apply_config_key(cfg, "p_c_dbm", value);
        else if (param == "n_u")
        {
            int n_u = std::stoi(value);
            if (n_u != 1 && n_u != 2 && n_u != 4)
                throw CLI::ValidationError("--values", "n_u must be 1, 2 or 4");
            cfg.scenario.uav_shape = n_u == 1 ? UpaShape{1, 1}
                                   : n_u == 2 ? UpaShape{2, 1}
                                              : UpaShape{2, 2};
        }
        else
            throw CLI::ValidationError("--param", "expected hpbw | n_p | p_c_dbm | n_u");

        cfg.output_prefix += "_" + param + "_" + value;
        std::printf("== %s = %s ==\n", param.c_str(), value.c_str());
        SummaryReport rep = run_montecarlo(cfg, out_dir);
        print_summary(rep);
    }
    return 0;
}

int cmd_report(const std::vector<std::string> &inputs, const std::string &out_dir)
{
    std::vector<TrialRecord> records;
    for (const std::string &path : inputs)
    {
        std::ifstream f(path);
        if (!f)
            throw std::runtime_error("report: cannot open " + path);
        std::vector<TrialRecord> part = read_trials_csv(f);
        records.insert(records.end(), part.begin(), part.end());
    }
    SummaryReport rep = summarize(records);
    print_summary(rep);
    if (!out_dir.empty())
    {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / "report_summary.csv");
        write_summary(f, rep);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"link-level simulator for pattern-reconfigurable antenna arrays"};
    app.require_subcommand(1);

    std::string config, out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--config", config, "run configuration file (key = value lines)");
    auto *seed_opt = app.add_option("--seed", seed, "base seed for trial streams");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--threads", threads, "worker thread count (0 = hardware)");

    auto *bank = app.add_subcommand("bank", "build and save a pattern bank");
    double hpbw = 0.0;
    std::string np, bank_out = "bank.bin";
    bank->add_option("--hpbw", hpbw, "half-power beamwidth in degrees");
    bank->add_option("--np", np, "patterns per axis, e.g. 7x7");
    bank->add_option("--out", bank_out, "output file");

    auto *codec = app.add_subcommand("codec", "compress a bank and report NMSE/ratio");
    std::string codec_bank, codec_out;
    double threshold = -30.0;
    codec->add_option("--bank", codec_bank, "bank file to compress")->required();
    codec->add_option("--threshold", threshold, "spectral threshold in dB (negative)");
    codec->add_option("--out", codec_out, "write the compressed bank here");

    auto *run = app.add_subcommand("run", "Monte Carlo run from a config file");

    auto *sweep = app.add_subcommand("sweep", "run one summary per parameter value");
    std::string param, values;
    sweep->add_option("--param", param, "hpbw | n_p | p_c_dbm | n_u")->required();
    sweep->add_option("--values", values, "comma-separated list")->required();

    auto *report = app.add_subcommand("report", "aggregate trial CSVs into a summary");
    std::vector<std::string> inputs;
    report->add_option("--in", inputs, "trial csv files")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (bank->parsed())
            return cmd_bank(config, hpbw, np, bank_out);
        if (codec->parsed())
            return cmd_codec(codec_bank, threshold, codec_out);
        if (run->parsed())
            return cmd_run(config, seed, !seed_opt->empty(), out_dir, threads);
        if (sweep->parsed())
            return cmd_sweep(config, param, values, seed, !seed_opt->empty(), out_dir,
                             threads);
        if (report->parsed())
            return cmd_report(inputs, out_dir);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

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

#include "rplink/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rplink
{

namespace
{

std::string trim(const std::string &s)
{
    auto a = s.find_first_not_of(" \t\r\n");
    auto b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double to_double(const std::string &key, const std::string &v)
{
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size())
        throw std::invalid_argument("config: bad numeric value for " + key + ": " + v);
    return d;
}

long to_long(const std::string &key, const std::string &v)
{
    double d = to_double(key, v);
    long l = std::lround(d);
    if (std::abs(d - l) > 1e-9)
        throw std::invalid_argument("config: expected an integer for " + key + ": " + v);
    return l;
}

bool to_bool(const std::string &key, const std::string &v)
{
    std::string s = lower(v);
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

std::vector<PathKind> to_paths(const std::string &key, const std::string &v)
{
    std::vector<PathKind> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
        std::string t = lower(trim(tok));
        if (t == "los")
            out.push_back(PathKind::LoS);
        else if (t == "nlos")
            out.push_back(PathKind::NLoS);
        else
            throw std::invalid_argument("config: bad path kind for " + key + ": " + tok);
    }
    if (out.empty())
        throw std::invalid_argument("config: empty path list for " + key);
    return out;
}

} // namespace

Estimator estimator_from_string(const std::string &name)
{
    std::string s = lower(trim(name));
    if (s == "omp" || s == "omp_mmv")
        return Estimator::OmpMmv;
    if (s == "music")
        return Estimator::Music;
    if (s == "oracle")
        return Estimator::Oracle;
    if (s == "omni")
        return Estimator::Omni;
    throw std::invalid_argument("config: unknown estimator: " + name);
}

std::string to_string(Estimator e)
{
    switch (e)
    {
    case Estimator::OmpMmv:
        return "omp";
    case Estimator::Music:
        return "music";
    case Estimator::Oracle:
        return "oracle";
    case Estimator::Omni:
        return "omni";
    }
    return "?";
}

double RunConfig::downlink_budget_watt() const
{
    double dbm = downlink_power_dbm < 1e299 ? downlink_power_dbm : scenario.p_c_dbm;
    return dbm_to_watt(dbm);
}

void RunConfig::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("config: trials must be >= 1");
    if (n_s < 1)
        throw std::invalid_argument("config: n_s must be >= 1");
    if (omp.eta_th <= 0.0 || omp.eta_th >= 1.0)
        throw std::invalid_argument("config: eta_th must be in (0, 1)");
    if (omp.max_paths < 1)
        throw std::invalid_argument("config: max_paths must be >= 1");
    if (codec.threshold_db >= 0.0)
        throw std::invalid_argument("config: threshold_db must be negative");
    if (estimator != Estimator::Omni && (bank.n_p_azi < 2 || bank.n_p_ele < 2))
        throw std::invalid_argument("config: need at least 2 patterns per axis");
}

void apply_config_key(RunConfig &cfg, const std::string &raw_key, const std::string &value)
{
    const std::string key = lower(trim(raw_key));
    const std::string v = trim(value);

    if (key == "f_c_hz")
        cfg.scenario.f_c_hz = to_double(key, v);
    else if (key == "d_los_m")
        cfg.scenario.d_los_m = to_double(key, v);
    else if (key == "d_nlos_leg1_m")
        cfg.scenario.d_nlos_leg1_m = to_double(key, v);
    else if (key == "d_nlos_leg2_m")
        cfg.scenario.d_nlos_leg2_m = to_double(key, v);
    else if (key == "s_eff_m2")
        cfg.scenario.s_eff_m2 = to_double(key, v);
    else if (key == "angle_range_deg")
        cfg.scenario.angle_range_deg = to_double(key, v);
    else if (key == "controller_paths")
        cfg.scenario.controller_paths = to_paths(key, v);
    else if (key == "jammer_paths")
        cfg.scenario.jammer_paths = to_paths(key, v);
    else if (key == "p_j_dbm")
        cfg.scenario.p_j_dbm = to_double(key, v);
    else if (key == "p_c_dbm")
        cfg.scenario.p_c_dbm = to_double(key, v);
    else if (key == "noise_psd_dbm_hz")
        cfg.scenario.noise_psd_dbm_hz = to_double(key, v);
    else if (key == "rx_bandwidth_hz")
        cfg.scenario.rx_bandwidth_hz = to_double(key, v);
    else if (key == "n_u_azi")
        cfg.scenario.uav_shape.n_azi = static_cast<int>(to_long(key, v));
    else if (key == "n_u_ele")
        cfg.scenario.uav_shape.n_ele = static_cast<int>(to_long(key, v));
    else if (key == "n_c_azi")
        cfg.scenario.controller_shape.n_azi = static_cast<int>(to_long(key, v));
    else if (key == "n_c_ele")
        cfg.scenario.controller_shape.n_ele = static_cast<int>(to_long(key, v));
    else if (key == "n_p_azi")
        cfg.bank.n_p_azi = static_cast<int>(to_long(key, v));
    else if (key == "n_p_ele")
        cfg.bank.n_p_ele = static_cast<int>(to_long(key, v));
    else if (key == "hpbw_deg")
        cfg.bank.element.hpbw_deg = to_double(key, v);
    else if (key == "sla_db")
        cfg.bank.element.sla_db = to_double(key, v);
    else if (key == "a_max_db")
        cfg.bank.element.a_max_db = to_double(key, v);
    else if (key == "n_a_azi")
        cfg.bank.grid.n_azi = static_cast<int>(to_long(key, v));
    else if (key == "n_a_ele")
        cfg.bank.grid.n_ele = static_cast<int>(to_long(key, v));
    else if (key == "use_compressed")
        cfg.use_compressed = to_bool(key, v);
    else if (key == "threshold_db")
        cfg.codec.threshold_db = to_double(key, v);
    else if (key == "estimator")
        cfg.estimator = estimator_from_string(v);
    else if (key == "eta_th")
        cfg.omp.eta_th = to_double(key, v);
    else if (key == "max_paths")
        cfg.omp.max_paths = static_cast<int>(to_long(key, v));
    else if (key == "n_s")
        cfg.n_s = to_long(key, v);
    else if (key == "trials")
        cfg.trials = static_cast<int>(to_long(key, v));
    else if (key == "base_seed")
        cfg.base_seed = static_cast<std::uint64_t>(to_long(key, v));
    else if (key == "threads")
        cfg.threads = static_cast<int>(to_long(key, v));
    else if (key == "downlink_power_dbm")
        cfg.downlink_power_dbm = to_double(key, v);
    else if (key == "output_prefix")
        cfg.output_prefix = v;
    else
        throw std::invalid_argument("config: unknown key: " + raw_key);
}

RunConfig parse_run_config(std::istream &in)
{
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not a key = value pair");
        apply_config_key(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("config: cannot open " + path);
    return parse_run_config(f);
}

} // namespace rplink

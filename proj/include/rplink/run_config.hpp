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

#include <cstdint>
#include <iosfwd>
#include <string>

#include "rplink/channel.hpp"
#include "rplink/estimation.hpp"
#include "rplink/pattern_codec.hpp"

namespace rplink
{

enum class Estimator
{
    OmpMmv,
    Music,
    Oracle,
    Omni
};

/// Full experiment configuration. Loadable from a flat key = value text
/// file; unknown keys are rejected.
struct RunConfig
{
    ScenarioConfig scenario;
    PatternBankConfig bank;
    CodecConfig codec;
    bool use_compressed = false;
    OmpConfig omp;
    Estimator estimator = Estimator::OmpMmv;
    long n_s = 1000;
    int trials = 500;
    std::uint64_t base_seed = 1;
    int threads = 0;                    // 0 = hardware concurrency
    double downlink_power_dbm = 1e300;  // sentinel: defaults to p_c_dbm
    std::string output_prefix = "trials";

    double downlink_budget_watt() const;
    void validate() const;
};

Estimator estimator_from_string(const std::string &name);
std::string to_string(Estimator e);

RunConfig parse_run_config(std::istream &in);
RunConfig load_run_config(const std::string &path);

/// Applies one `key = value` assignment (the same syntax as config lines).
void apply_config_key(RunConfig &cfg, const std::string &key, const std::string &value);

} // namespace rplink

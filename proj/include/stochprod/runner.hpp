// Copyright 2026 The stochprod Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace stochprod {

/// Malformed config, missing seed, unknown suite name.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { kExitOk = 0, kExitSuiteFailed = 1, kExitConfigError = 2 };

struct RunConfig {
    std::uint64_t seed = 0;
    std::vector<std::string> suites;
    nlohmann::json contexts = nlohmann::json::array();  // twirled context descriptors
    nlohmann::json tolerances = nlohmann::json::object();
    nlohmann::json phase_space = nlohmann::json::object();
    std::string output_dir = "stochprod-out";
};

const std::vector<std::string>& suite_names();

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

struct SuiteOutcome {
    bool passed = false;
    nlohmann::json report;  // deterministic for a given config and seed
    double seconds = 0;
};

SuiteOutcome run_suite(const std::string& name, const RunConfig& cfg);

/// Output directory precedence: explicit override, then STOCHPROD_OUT_DIR, then the config.
std::string resolve_output_dir(const RunConfig& cfg, const std::optional<std::string>& override_dir);

/// Writes <suite>.json and <suite>.timing.json per suite. Returns an ExitCode.
int run(const std::string& config_path, const std::optional<std::string>& out_dir,
        const std::optional<std::uint64_t>& seed, std::ostream& log);
/// Writes the demo CSV tables. Returns an ExitCode.
int demo(const std::string& config_path, std::ostream& log);

}  // namespace stochprod

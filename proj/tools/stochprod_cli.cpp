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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stochprod/stochprod.h"

namespace {

int report(sp_status s, int code) {
    if (s != SP_OK) {
        std::cerr << "error: " << sp_last_error() << '\n';
        return s == SP_ERR_CONFIG || s == SP_ERR_INVALID_ARGUMENT ? 2 : 1;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic products and twirled-product verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sp_version());

    std::string run_config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "run the suites listed in a config, write JSON reports");
    run->add_option("--config", run_config, "config JSON")->required();
    run->add_option("--out", out_dir, "output directory (overrides STOCHPROD_OUT_DIR and the config)");
    run->add_option("--seed", seed, "override the config seed");

    std::string demo_config;
    auto* demo = app.add_subcommand("demo", "write the demo CSV tables");
    demo->add_option("--config", demo_config, "config JSON")->required();

    auto* suites = app.add_subcommand("suites", "list suite names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    int code = 0;
    if (*run) {
        const sp_status s = sp_run(run_config.c_str(), out_dir ? out_dir->c_str() : nullptr, seed ? 1 : 0,
                                   seed.value_or(0), &code);
        return report(s, code);
    }
    if (*demo) return report(sp_demo(demo_config.c_str(), &code), code);
    if (*suites) {
        for (std::size_t i = 0; i < sp_suite_count(); ++i) std::cout << sp_suite_name(i) << '\n';
        return 0;
    }
    return 2;
}

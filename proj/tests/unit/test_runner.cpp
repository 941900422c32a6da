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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stochprod/runner.hpp"

using namespace stochprod;
using nlohmann::json;

TEST_CASE("config parsing") {
    CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
    CHECK_THROWS_AS(parse_config({{"seed", -3}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"seed", 1}, {"suites", {"nope"}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"seed", 1}, {"contexts", {{{"d", 3}}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"seed", 1}, {"tolerances", {{"finite", "tight"}}}}), ConfigError);
    const auto all = parse_config({{"seed", 1}});
    CHECK(all.suites == suite_names());
    const auto one = parse_config({{"seed", 18446744073709551615ULL}, {"suites", {"phase-space"}}, {"output_dir", "x"}});
    CHECK(one.seed == 18446744073709551615ULL);
    CHECK(one.suites.size() == 1);
    CHECK(one.output_dir == "x");
}

TEST_CASE("output directory precedence") {
    RunConfig cfg;
    cfg.output_dir = "from-config";
    ::unsetenv("STOCHPROD_OUT_DIR");
    CHECK(resolve_output_dir(cfg, std::nullopt) == "from-config");
    ::setenv("STOCHPROD_OUT_DIR", "from-env", 1);
    CHECK(resolve_output_dir(cfg, std::nullopt) == "from-env");
    CHECK(resolve_output_dir(cfg, std::string("from-flag")) == "from-flag");
    ::unsetenv("STOCHPROD_OUT_DIR");
}

TEST_CASE("suite reports are deterministic and carry the schema") {
    RunConfig cfg = parse_config({{"seed", 77}, {"contexts", {{{"rep", "weyl"}, {"d", 2}, {"fiducial", "random_mixed"}, {"nu", "random"}}}}});
    for (const char* name : {"operator-core", "twirled-core", "group-harmonics"}) {
        const auto a = run_suite(name, cfg), b = run_suite(name, cfg);
        CHECK(a.passed);
        CHECK(a.report.dump() == b.report.dump());
        CHECK(a.report.at("schema") == 1);
        CHECK(a.report.at("suite") == name);
        CHECK(a.report.at("seed") == 77);
    }
    RunConfig other = cfg;
    other.seed = 78;
    CHECK(run_suite("twirled-core", cfg).report.dump() != run_suite("twirled-core", other).report.dump());
    CHECK_THROWS_AS(run_suite("nope", cfg), ConfigError);
}

TEST_CASE("run writes reports and timings") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "stochprod-runner-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"seed": 5, "suites": ["operator-core"]})";
    std::ostringstream log;
    CHECK(run(cfg.string(), (dir / "out").string(), std::nullopt, log) == kExitOk);
    CHECK(fs::exists(dir / "out" / "operator-core.json"));
    CHECK(fs::exists(dir / "out" / "operator-core.timing.json"));
    std::ifstream in(dir / "out" / "operator-core.json");
    const json rep = json::parse(in);
    CHECK(rep.at("passed") == true);
    CHECK(rep.at("seed") == 5);
    CHECK(run(cfg.string(), (dir / "out2").string(), std::uint64_t{9}, log) == kExitOk);
    std::ifstream in2(dir / "out2" / "operator-core.json");
    CHECK(json::parse(in2).at("seed") == 9);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run((dir / "broken.json").string(), std::nullopt, std::nullopt, log) == kExitConfigError);
    fs::remove_all(dir);
}

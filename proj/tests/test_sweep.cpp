// SPDX-License-Identifier: Apache-2.0
//
// fasris  Outage analysis for fluid-antenna receivers behind a reconfigurable surface
// Copyright (C) 2026 fasris contributors
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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fasris/config.hpp"
#include "fasris/sweep.hpp"

using namespace fasris;

namespace
{

ExperimentConfig analytic_only()
{
    ExperimentConfig config;
    config.estimators = {Estimator::clt_bc, Estimator::clt_iid};
    return config;
}

} // namespace

TEST_CASE("point sweep emits one row per estimator", "[sweep]")
{
    const SweepResult result = run_sweep(analytic_only(), SweepAxis::point());
    REQUIRE(result.rows.size() == 2);
    CHECK(result.skipped.empty());

    CHECK(result.rows[0].estimator == Estimator::clt_bc);
    CHECK(result.rows[1].estimator == Estimator::clt_iid);
    CHECK(result.rows[0].probability == Catch::Approx(0.257896070934).epsilon(1e-9));
    CHECK(result.rows[1].probability == Catch::Approx(0.388715185889).epsilon(1e-9));
    for (const ResultRow &row : result.rows)
    {
        CHECK(row.num_elements == 40);
        CHECK(row.num_ports == 20);
        CHECK(row.threshold == Catch::Approx(8.36660026534076e-4).epsilon(1e-12));
    }
}

TEST_CASE("rows come out estimator-major in axis order", "[sweep]")
{
    ExperimentConfig config = analytic_only();
    const SweepResult result = run_sweep(config, SweepAxis::ports({5, 10, 20}));
    REQUIRE(result.rows.size() == 6);
    const int expected_ports[] = {5, 10, 20, 5, 10, 20};
    for (int i = 0; i < 6; ++i)
    {
        CHECK(result.rows[i].estimator ==
              (i < 3 ? Estimator::clt_bc : Estimator::clt_iid));
        CHECK(result.rows[i].num_ports == expected_ports[i]);
    }
}

TEST_CASE("dimension cap skips full-correlation points", "[sweep]")
{
    ExperimentConfig config;
    config.estimators = {Estimator::clt};
    config.mvn_dimension_cap = 10;

    const SweepResult result = run_sweep(config, SweepAxis::ports({5, 15}));
    REQUIRE(result.rows.size() == 1);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.rows[0].num_ports == 5);
    CHECK(result.skipped[0].estimator == Estimator::clt);
    CHECK(result.skipped[0].num_ports == 15);
    CHECK(result.skipped[0].reason == "skipped: dimension");
}

TEST_CASE("threshold scaling tracks the element count", "[sweep]")
{
    ExperimentConfig config;
    config.estimators = {Estimator::clt_iid};
    config.scale_threshold_to_mean = true;

    const SweepResult result = run_sweep(config, SweepAxis::elements({20, 40}));
    REQUIRE(result.rows.size() == 2);
    for (const ResultRow &row : result.rows)
    {
        LinkBudget budget;
        budget.num_elements = row.num_elements;
        CHECK(row.threshold == Catch::Approx(gamma_moments(budget).mean).epsilon(1e-14));
        CHECK(row.probability > 0.0);
        CHECK(row.probability < 1.0);
    }
    CHECK(result.rows[0].threshold != result.rows[1].threshold);
}

TEST_CASE("simulation rows share the seed across sweep points", "[sweep]")
{
    ExperimentConfig config;
    config.estimators = {Estimator::monte_carlo};
    config.num_ports = 3;
    config.num_elements = 4;
    config.trials = 2'000;
    config.seed = 42;

    const SweepResult result = run_sweep(config, SweepAxis::ports({3, 3}));
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].probability == result.rows[1].probability);
    CHECK(result.rows[0].seed == 42);
    CHECK(result.rows[1].seed == 42);
}

TEST_CASE("empty axes are rejected", "[sweep]")
{
    CHECK_THROWS_AS(run_sweep(analytic_only(), SweepAxis::ports({})), config_error);
}

TEST_CASE("csv emission round-trips byte for byte", "[sweep]")
{
    ExperimentConfig config = analytic_only();
    config.stable_output = true;
    const SweepResult result = run_sweep(config, SweepAxis::ports({5, 20}));

    std::ostringstream first;
    emit_csv(result.rows, first);

    std::istringstream parse_in(first.str());
    const std::vector<ResultRow> parsed = parse_csv(parse_in);
    REQUIRE(parsed.size() == result.rows.size());

    std::ostringstream second;
    emit_csv(parsed, second);
    CHECK(first.str() == second.str());

    // stable output zeroes the timing column
    for (const ResultRow &row : parsed)
        CHECK(row.wall_time_ms == 0.0);
}

TEST_CASE("csv schema is pinned", "[sweep]")
{
    std::ostringstream out;
    emit_csv({}, out);
    CHECK(out.str() ==
          "estimator,M,N,W,R,P_S,sigma2,threshold,probability,error_estimate,"
          "wall_time_ms,seed\n");
}

TEST_CASE("csv parser rejects malformed input", "[sweep]")
{
    SECTION("wrong header")
    {
        std::istringstream in("a,b,c\n");
        CHECK_THROWS_AS(parse_csv(in), config_error);
    }

    SECTION("wrong field count")
    {
        std::istringstream in(std::string(kCsvHeader) + "\nCLT,40,20\n");
        CHECK_THROWS_AS(parse_csv(in), config_error);
    }

    SECTION("unknown estimator")
    {
        std::istringstream in(std::string(kCsvHeader) +
                              "\nXXX,40,20,1,3,0.1,1e-8,1e-3,0.5,0,0,1\n");
        CHECK_THROWS_AS(parse_csv(in), config_error);
    }

    SECTION("garbage numeric field")
    {
        std::istringstream in(std::string(kCsvHeader) +
                              "\nCLT,forty,20,1,3,0.1,1e-8,1e-3,0.5,0,0,1\n");
        CHECK_THROWS_AS(parse_csv(in), config_error);
    }

    SECTION("empty input")
    {
        std::istringstream in("");
        CHECK_THROWS_AS(parse_csv(in), config_error);
    }
}

TEST_CASE("jsonl rows carry the same schema", "[sweep]")
{
    ExperimentConfig config = analytic_only();
    config.stable_output = true;
    const SweepResult result = run_sweep(config, SweepAxis::point());

    std::ostringstream out;
    emit_jsonl(result.rows, out);

    std::istringstream lines(out.str());
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line))
    {
        const auto record = nlohmann::json::parse(line);
        CHECK(record.contains("estimator"));
        CHECK(record.contains("M"));
        CHECK(record.contains("N"));
        CHECK(record.contains("W"));
        CHECK(record.contains("threshold"));
        CHECK(record.contains("probability"));
        CHECK(record.contains("error_estimate"));
        CHECK(record.contains("wall_time_ms"));
        CHECK(record.contains("seed"));
        ++count;
    }
    CHECK(count == result.rows.size());
}

TEST_CASE("config json loading", "[sweep]")
{
    SECTION("defaults block and gain via distance")
    {
        const auto root = nlohmann::json::parse(R"({
            "defaults": {
                "num_elements": 32,
                "num_ports": 8,
                "gain_bs_ris": {"distance": 200.0, "exponent": 2.0},
                "gain_ris_user": 2.5e-5
            },
            "simulation": {"trials": 5000, "seed": 9},
            "estimator": {"mu": 0.8},
            "estimators": ["CLT-BC", "MC"],
            "output": {"format": "jsonl", "stable": true}
        })");
        const ExperimentConfig config = config_from_json(root);
        CHECK(config.num_elements == 32);
        CHECK(config.num_ports == 8);
        CHECK(config.gain_bs_ris == Catch::Approx(2.5e-5).epsilon(1e-12));
        CHECK(config.gain_ris_user == 2.5e-5);
        CHECK(config.trials == 5000);
        CHECK(config.seed == 9);
        CHECK(config.mu == 0.8);
        CHECK(config.estimators ==
              std::vector<Estimator>{Estimator::clt_bc, Estimator::monte_carlo});
        CHECK(config.format == OutputFormat::jsonl);
        CHECK(config.stable_output);
    }

    SECTION("unknown fields are rejected by name")
    {
        const auto root = nlohmann::json::parse(R"({"defaults": {"num_prots": 8}})");
        try
        {
            config_from_json(root);
            FAIL("expected config_error");
        }
        catch (const config_error &error)
        {
            CHECK(error.field() == "defaults.num_prots");
        }
    }

    SECTION("invalid values are rejected with their field name")
    {
        const auto root = nlohmann::json::parse(R"({"estimator": {"mu": 1.5}})");
        CHECK_THROWS_AS(config_from_json(root), config_error);
    }

    SECTION("estimator names are validated")
    {
        const auto root = nlohmann::json::parse(R"({"estimators": ["CLT", "BOGUS"]})");
        CHECK_THROWS_AS(config_from_json(root), config_error);
    }
}

TEST_CASE("blockfit report", "[sweep]")
{
    std::ostringstream out;
    show_blockfit(out, {20, 1.0}, {});
    const std::string text = out.str();
    CHECK(text.find("blocks: 4") != std::string::npos);
    CHECK(text.find("sizes: 10 7 2 1") != std::string::npos);
    CHECK(text.find("warning") == std::string::npos);

    std::ostringstream clamped;
    EstimatorSettings settings;
    settings.eigen_threshold = 100.0;
    show_blockfit(clamped, {20, 1.0}, settings);
    CHECK(clamped.str().find("warning: threshold exceeds the largest eigenvalue") !=
          std::string::npos);
}

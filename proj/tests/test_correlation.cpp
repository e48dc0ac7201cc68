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
#include <limits>
#include <vector>

#include "fasris/correlation.hpp"
#include "support/oracles.hpp"

using namespace fasris;

TEST_CASE("port correlation follows the sinc law", "[correlation]")
{
    CHECK(port_correlation(0, {20, 1.0}) == 1.0);
    CHECK(port_correlation(3, {1, 1.0}) == 1.0); // single port has no neighbours

    // N=11, W=1, delta=1: argument 2*pi/10
    CHECK(port_correlation(1, {11, 1.0}) == Catch::Approx(0.935489283789).epsilon(1e-11));
    CHECK(port_correlation(1, {11, 1.0}) ==
          Catch::Approx(std::sin(0.6283185307179586) / 0.6283185307179586).epsilon(1e-14));

    // symmetric in the offset sign
    CHECK(port_correlation(-4, {20, 1.0}) == port_correlation(4, {20, 1.0}));

    // wider antennas decorrelate adjacent ports
    CHECK(port_correlation(1, {20, 3.0}) < port_correlation(1, {20, 1.0}));
}

TEST_CASE("sigma is symmetric Toeplitz with unit diagonal", "[correlation]")
{
    const CorrelationMatrix sigma = build_sigma({20, 1.0});
    REQUIRE(sigma.rows() == 20);
    REQUIRE(sigma.cols() == 20);

    for (int i = 0; i < 20; ++i)
        CHECK(sigma(i, i) == 1.0);
    CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 19; ++i)
        for (int j = 0; j < 19; ++j)
            CHECK(sigma(i, j) == sigma(i + 1, j + 1));

    const CorrelationMatrix trivial = build_sigma({1, 2.0});
    REQUIRE(trivial.rows() == 1);
    CHECK(trivial(0, 0) == 1.0);
}

TEST_CASE("geometry validation", "[correlation]")
{
    CHECK_THROWS_AS(build_sigma({0, 1.0}), config_error);
    CHECK_THROWS_AS(build_sigma({-3, 1.0}), config_error);
    CHECK_THROWS_AS(build_sigma({10, 0.0}), config_error);
    CHECK_THROWS_AS(build_sigma({10, -1.0}), config_error);
}

TEST_CASE("spectrum is descending and mass preserving", "[correlation]")
{
    const auto spectrum = eigen_spectrum(build_sigma({20, 1.0}));
    REQUIRE(spectrum.values.size() == 20);
    for (int i = 0; i + 1 < 20; ++i)
        CHECK(spectrum.values[i] >= spectrum.values[i + 1]);
    CHECK(spectrum.total_mass == Catch::Approx(20.0).epsilon(1e-12)); // trace of sigma

    // leading eigenvalues of the N=20, W=1 geometry
    CHECK(spectrum.values[0] == Catch::Approx(9.367714300474).epsilon(1e-9));
    CHECK(spectrum.values[1] == Catch::Approx(7.526379341751).epsilon(1e-9));
    CHECK(spectrum.values[2] == Catch::Approx(2.770232766201).epsilon(1e-9));
    CHECK(spectrum.values[3] == Catch::Approx(0.3201821367443).epsilon(1e-9));
    CHECK(spectrum.values[4] == Catch::Approx(0.01507767085172).epsilon(1e-8));
}

TEST_CASE("block count selection by threshold", "[correlation]")
{
    const auto spectrum = eigen_spectrum(build_sigma({20, 1.0}));

    SECTION("default threshold keeps the four significant modes")
    {
        const auto selection = select_block_count(spectrum, 0.1);
        CHECK(selection.num_blocks == 4);
        CHECK_FALSE(selection.threshold_above_max);
    }

    SECTION("threshold above the largest eigenvalue clamps to one block")
    {
        const auto selection = select_block_count(spectrum, 50.0);
        CHECK(selection.num_blocks == 1);
        CHECK(selection.threshold_above_max);
    }

    SECTION("tiny threshold keeps every nonnegative mode")
    {
        const auto selection = select_block_count(spectrum, 1e-18);
        CHECK(selection.num_blocks <= 20);
        CHECK(selection.num_blocks >= 10);
    }

    SECTION("threshold must be positive")
    {
        CHECK_THROWS_AS(select_block_count(spectrum, 0.0), config_error);
        CHECK_THROWS_AS(select_block_count(spectrum, -0.1), config_error);
    }
}

TEST_CASE("block count selection by mass fraction", "[correlation]")
{
    const auto spectrum = eigen_spectrum(build_sigma({20, 1.0}));
    CHECK(select_block_count_by_mass(spectrum, 0.95) == 3);
    CHECK(select_block_count_by_mass(spectrum, 0.999) == 4);
    CHECK(select_block_count_by_mass(spectrum, 1e-6) == 1);
    CHECK_THROWS_AS(select_block_count_by_mass(spectrum, 0.0), config_error);
    CHECK_THROWS_AS(select_block_count_by_mass(spectrum, 1.5), config_error);
}

TEST_CASE("block model spectrum", "[correlation]")
{
    BlockSpec spec;
    spec.num_blocks = 4;
    spec.block_sizes = {10, 7, 2, 1};
    spec.intra_block_mu = 0.9;

    const auto model = block_model_spectrum(spec);
    REQUIRE(model.values.size() == 20);
    CHECK(model.values[0] == Catch::Approx(1.0 + 9.0 * 0.9).epsilon(1e-14));
    CHECK(model.values[1] == Catch::Approx(1.0 + 6.0 * 0.9).epsilon(1e-14));
    CHECK(model.values[2] == Catch::Approx(1.0 + 1.0 * 0.9).epsilon(1e-14));
    CHECK(model.values[3] == Catch::Approx(1.0).epsilon(1e-14));
    for (int i = 4; i < 20; ++i)
        CHECK(model.values[i] == Catch::Approx(0.1).epsilon(1e-14));
    CHECK(model.total_mass == Catch::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("spectral distance", "[correlation]")
{
    const auto spectrum = eigen_spectrum(build_sigma({20, 1.0}));

    BlockSpec fitted;
    fitted.num_blocks = 4;
    fitted.block_sizes = {10, 7, 2, 1};
    fitted.intra_block_mu = 0.9;
    CHECK(spectral_distance(block_model_spectrum(fitted), spectrum) ==
          Catch::Approx(2.7169879732343607).epsilon(1e-9));

    BlockSpec narrow;
    narrow.num_blocks = 1;
    narrow.block_sizes = {3};
    CHECK_THROWS_AS(spectral_distance(block_model_spectrum(narrow), spectrum), numeric_error);
}

TEST_CASE("fitted block sizes match frozen geometries", "[correlation]")
{
    struct Case
    {
        int ports;
        std::vector<int> sizes;
    };
    const Case cases[] = {
        {5, {2, 1, 1, 1}},
        {10, {4, 4, 1, 1}},
        {20, {10, 7, 2, 1}},
    };
    for (const Case &expected : cases)
    {
        const auto spectrum = eigen_spectrum(build_sigma({expected.ports, 1.0}));
        const auto selection = select_block_count(spectrum, 0.1);
        const auto spec = fit_block_sizes(spectrum, selection.num_blocks, 0.9, expected.ports);
        CHECK(spec.block_sizes == expected.sizes);
        CHECK(spec.num_blocks == selection.num_blocks);
        CHECK(spec.total_ports() == expected.ports);
    }
}

TEST_CASE("fit invariants hold across geometries", "[correlation]")
{
    for (int ports : {2, 3, 7, 13, 24, 37, 50})
        for (double size : {0.5, 1.0, 2.0})
        {
            const auto spectrum = eigen_spectrum(build_sigma({ports, size}));
            const auto selection = select_block_count(spectrum, 0.1);
            const auto spec = fit_block_sizes(spectrum, selection.num_blocks, 0.9, ports);

            CHECK(spec.total_ports() == ports);
            CHECK(int(spec.block_sizes.size()) == spec.num_blocks);
            for (std::size_t d = 0; d + 1 < spec.block_sizes.size(); ++d)
                CHECK(spec.block_sizes[d] >= spec.block_sizes[d + 1]);
            for (int block : spec.block_sizes)
                CHECK(block >= 1);
        }
}

TEST_CASE("fit matches exhaustive search on small geometries", "[correlation]")
{
    for (int ports = 2; ports <= 12; ++ports)
        for (double size : {0.5, 1.0, 2.0})
        {
            const auto spectrum = eigen_spectrum(build_sigma({ports, size}));
            const int blocks = select_block_count(spectrum, 0.1).num_blocks;
            const auto spec = fit_block_sizes(spectrum, blocks, 0.9, ports);
            const double fitted =
                spectral_distance(block_model_spectrum(spec), spectrum);

            double best = std::numeric_limits<double>::infinity();
            oracle::for_each_partition(ports, blocks, [&](const std::vector<int> &sizes) {
                BlockSpec candidate;
                candidate.num_blocks = blocks;
                candidate.block_sizes = sizes;
                candidate.intra_block_mu = 0.9;
                best = std::min(best, spectral_distance(block_model_spectrum(candidate),
                                                        spectrum));
            });

            CHECK(fitted == Catch::Approx(best).margin(1e-10));
        }
}

TEST_CASE("fit input validation", "[correlation]")
{
    const auto spectrum = eigen_spectrum(build_sigma({10, 1.0}));
    CHECK_THROWS_AS(fit_block_sizes(spectrum, 0, 0.9, 10), config_error);
    CHECK_THROWS_AS(fit_block_sizes(spectrum, 11, 0.9, 10), config_error);
    CHECK_THROWS_AS(fit_block_sizes(spectrum, 2, 0.0, 10), config_error);
    CHECK_THROWS_AS(fit_block_sizes(spectrum, 2, 1.0, 10), config_error);
}

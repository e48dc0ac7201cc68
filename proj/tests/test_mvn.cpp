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

#include <Eigen/Dense>

#include "fasris/correlation.hpp"
#include "fasris/mvn.hpp"
#include "support/oracles.hpp"

using namespace fasris;

namespace
{

MvnProblem standard_problem(const Eigen::MatrixXd &cov, double limit)
{
    MvnProblem problem;
    problem.upper_limit = limit;
    problem.mean = Eigen::VectorXd::Zero(cov.rows());
    problem.covariance = cov;
    return problem;
}

} // namespace

TEST_CASE("psd square root factors the port matrix", "[mvn]")
{
    const CorrelationMatrix sigma = build_sigma({20, 1.0});
    const Eigen::MatrixXd factor = psd_sqrt(sigma);
    CHECK((factor * factor.transpose() - sigma).cwiseAbs().maxCoeff() < 1e-9);

    SECTION("rank deficient input is factored through the eigen path")
    {
        Eigen::MatrixXd singular(2, 2);
        singular << 1.0, 1.0, 1.0, 1.0;
        PsdRepairInfo info;
        const Eigen::MatrixXd root = psd_sqrt(singular, &info);
        CHECK((root * root.transpose() - singular).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("indefinite input is rejected")
    {
        Eigen::MatrixXd indefinite(2, 2);
        indefinite << 1.0, 2.0, 2.0, 1.0;
        CHECK_THROWS_AS(psd_sqrt(indefinite), numeric_error);
    }
}

TEST_CASE("one-dimensional cdf is exact", "[mvn]")
{
    Eigen::MatrixXd cov(1, 1);
    cov << 4.0;
    MvnProblem problem = standard_problem(cov, 1.0);
    const MvnEstimate estimate = mvn_cdf(problem);
    CHECK(estimate.value == Catch::Approx(normal_cdf(0.5)).epsilon(1e-14));
    CHECK(estimate.error_estimate == 0.0);

    problem.mean(0) = 1.0;
    CHECK(mvn_cdf(problem).value == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("independent coordinates multiply", "[mvn]")
{
    const int n = 5;
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
    const MvnEstimate estimate = mvn_cdf(standard_problem(cov, 0.7));
    const double expected = std::pow(normal_cdf(0.7), n);
    CHECK(estimate.value == Catch::Approx(expected).epsilon(1e-10));
    CHECK(estimate.error_estimate < 1e-12);
}

TEST_CASE("bivariate orthant probabilities", "[mvn]")
{
    for (double rho : {-0.5, 0.0, 0.3, 0.5, 0.9})
    {
        Eigen::MatrixXd cov(2, 2);
        cov << 1.0, rho, rho, 1.0;
        const MvnEstimate estimate = mvn_cdf(standard_problem(cov, 0.0));
        const double exact = oracle::bvn_orthant(rho);
        INFO("rho = " << rho);
        CHECK(std::abs(estimate.value - exact) < 5e-4);
        CHECK(std::abs(estimate.value - exact) < 6.0 * estimate.error_estimate + 1e-5);
    }
}

TEST_CASE("trivariate equicorrelated median orthant", "[mvn]")
{
    Eigen::MatrixXd cov(3, 3);
    cov.setConstant(0.5);
    cov.diagonal().setOnes();
    const MvnEstimate estimate = mvn_cdf(standard_problem(cov, 0.0));
    // for rho = 1/2 the trivariate orthant probability is exactly 1/4
    CHECK(std::abs(estimate.value - 0.25) < 5e-4);
    CHECK(estimate.error_estimate > 0.0);
}

TEST_CASE("rank deficient covariance collapses correctly", "[mvn]")
{
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 1.0, 1.0, 1.0; // perfectly correlated pair
    const MvnEstimate estimate = mvn_cdf(standard_problem(cov, 0.0));
    CHECK(std::abs(estimate.value - 0.5) < 5e-4);
}

TEST_CASE("estimates are deterministic in the seed", "[mvn]")
{
    Eigen::MatrixXd cov(3, 3);
    cov.setConstant(0.3);
    cov.diagonal().setOnes();
    MvnProblem problem = standard_problem(cov, 0.4);

    const MvnEstimate first = mvn_cdf(problem);
    const MvnEstimate second = mvn_cdf(problem);
    CHECK(first.value == second.value);
    CHECK(first.error_estimate == second.error_estimate);

    problem.rng_seed = 99;
    const MvnEstimate reseeded = mvn_cdf(problem);
    CHECK(reseeded.value != first.value);
    CHECK(std::abs(reseeded.value - first.value) <
          6.0 * (first.error_estimate + reseeded.error_estimate) + 1e-6);
}

TEST_CASE("input validation", "[mvn]")
{
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 0.0, 0.0, 1.0;
    MvnProblem problem = standard_problem(cov, 0.0);
    problem.mean = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(mvn_cdf(problem), numeric_error);

    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 3.0, 3.0, 1.0;
    CHECK_THROWS_AS(mvn_cdf(standard_problem(indefinite, 0.0)), numeric_error);
}

TEST_CASE("tail values stay inside [0, 1]", "[mvn]")
{
    Eigen::MatrixXd cov(4, 4);
    cov.setConstant(0.6);
    cov.diagonal().setOnes();

    const MvnEstimate low = mvn_cdf(standard_problem(cov, -12.0));
    CHECK(low.value >= 0.0);
    CHECK(low.value < 1e-12);

    const MvnEstimate high = mvn_cdf(standard_problem(cov, 12.0));
    CHECK(high.value <= 1.0);
    CHECK(high.value > 1.0 - 1e-12);
}

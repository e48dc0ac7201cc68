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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fasris/errors.hpp"
#include "fasris/moments.hpp"
#include "fasris/quadrature.hpp"
#include "fasris/rng.hpp"

namespace fasris
{

/*!
 * Symmetric factor F with F F^T = matrix. Cholesky when the matrix is strictly positive
 * definite; otherwise an eigendecomposition with negative eigenvalues clipped to zero
 * (rank-deficient inputs are fine). Eigenvalues below -tol raise, naming the offender.
 * `info`, when given, records whether clipping ran.
 */
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd &matrix, PsdRepairInfo *info = nullptr)
{
    if (matrix.rows() != matrix.cols())
        throw numeric_error("psd_sqrt: matrix must be square");
    if (info)
        *info = PsdRepairInfo{};

    Eigen::LLT<Eigen::MatrixXd> llt(matrix);
    if (llt.info() == Eigen::Success)
        return llt.matrixL();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw numeric_error("psd_sqrt: eigensolver did not converge");
    const double min_eig = solver.eigenvalues().minCoeff();
    const double scale = std::max(1.0, matrix.diagonal().cwiseAbs().maxCoeff());
    const double tol = 1e-10 * double(matrix.rows()) * scale;
    if (min_eig < -tol)
        throw numeric_error("psd_sqrt: matrix is indefinite, eigenvalue " +
                            std::to_string(min_eig));
    if (info)
    {
        info->repaired = (min_eig < 0.0);
        info->min_eigenvalue = min_eig;
    }
    Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * clipped.asDiagonal();
}

// One multivariate normal orthant problem: P(X_i <= upper_limit for all i),
// X ~ N(mean, covariance).
struct MvnProblem
{
    double upper_limit = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    std::uint64_t rng_seed = 0x2545f4914f6cdd1dULL;
    int sample_budget = 1 << 14; // lattice points per replicate
    int replicates = 8;          // independent randomization shifts
};

struct MvnEstimate
{
    double value = 0.0;
    double error_estimate = 0.0; // standard error across randomization replicates
};

namespace detail
{

inline std::vector<double> prime_sqrts(int count)
{
    std::vector<double> roots;
    roots.reserve(count);
    int candidate = 2;
    while (int(roots.size()) < count)
    {
        bool prime = true;
        for (int d = 2; d * d <= candidate; ++d)
            if (candidate % d == 0)
            {
                prime = false;
                break;
            }
        if (prime)
            roots.push_back(std::sqrt(double(candidate)));
        ++candidate;
    }
    return roots;
}

struct GenzFactorization
{
    Eigen::MatrixXd lower;  // reordered Cholesky factor, zero rows on degenerate pivots
    Eigen::VectorXd limits; // reordered upper_limit - mean
    int order = 0;
};

/*!
 * Reordered Cholesky for the sequential-conditioning scheme. At each step the pivot with
 * the smallest conditional probability (evaluated at truncated-normal expected values)
 * moves first, which concentrates the integrand's variation in the leading variables.
 * Pivots whose conditional variance vanishes get a zero factor row; conditional
 * variances below -tol mean the matrix is not PSD and raise.
 */
inline GenzFactorization genz_reorder_cholesky(Eigen::MatrixXd cov, Eigen::VectorXd b)
{
    const int n = int(cov.rows());
    const double scale = std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
    const double tol = 1e-12 * scale;

    GenzFactorization fact;
    fact.lower = Eigen::MatrixXd::Zero(n, n);
    fact.order = n;
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(n);

    for (int i = 0; i < n; ++i)
    {
        int pivot = i;
        double best_prob = 2.0;
        for (int j = i; j < n; ++j)
        {
            double d2 = cov(j, j);
            double num = b[j];
            for (int k = 0; k < i; ++k)
            {
                d2 -= fact.lower(j, k) * fact.lower(j, k);
                num -= fact.lower(j, k) * expected[k];
            }
            double prob;
            if (d2 > tol)
                prob = normal_cdf(num / std::sqrt(d2));
            else
                prob = (num >= 0.0) ? 1.0 : 0.0;
            if (prob < best_prob)
            {
                best_prob = prob;
                pivot = j;
            }
        }

        if (pivot != i)
        {
            cov.row(i).swap(cov.row(pivot));
            cov.col(i).swap(cov.col(pivot));
            std::swap(b[i], b[pivot]);
            fact.lower.row(i).swap(fact.lower.row(pivot));
        }

        double d2 = cov(i, i);
        double num = b[i];
        for (int k = 0; k < i; ++k)
        {
            d2 -= fact.lower(i, k) * fact.lower(i, k);
            num -= fact.lower(i, k) * expected[k];
        }
        if (d2 < -tol)
            throw numeric_error(
                "mvn_cdf: covariance not positive semidefinite (conditional variance " +
                std::to_string(d2) + ")");

        if (d2 > tol)
        {
            const double lii = std::sqrt(d2);
            fact.lower(i, i) = lii;
            for (int r = i + 1; r < n; ++r)
            {
                double value = cov(r, i);
                for (int k = 0; k < i; ++k)
                    value -= fact.lower(r, k) * fact.lower(i, k);
                fact.lower(r, i) = value / lii;
            }
            const double beta = num / lii;
            const double prob = normal_cdf(beta);
            expected[i] = (prob > 1e-300) ? -normal_pdf(beta) / prob : -std::abs(beta);
        }
        else
        {
            fact.lower(i, i) = 0.0;
            expected[i] = 0.0;
        }
    }
    fact.limits = b;
    return fact;
}

} // namespace detail

/*!
 * P(X_1 <= y, ..., X_N <= y) for X ~ N(mean, covariance) by Genz sequential
 * conditioning over a randomized Richtmyer lattice (square roots of primes, tent
 * transform, `replicates` independent shifts). Deterministic given rng_seed.
 */
inline MvnEstimate mvn_cdf(const MvnProblem &problem)
{
    const int n = int(problem.covariance.rows());
    if (n < 1)
        throw numeric_error("mvn_cdf: empty problem");
    if (problem.mean.size() != n || problem.covariance.cols() != n)
        throw numeric_error("mvn_cdf: mean/covariance dimensions disagree");

    Eigen::VectorXd b = Eigen::VectorXd::Constant(n, problem.upper_limit) - problem.mean;

    if (n == 1)
    {
        const double var = problem.covariance(0, 0);
        MvnEstimate estimate;
        if (var > 0.0)
            estimate.value = normal_cdf(b[0] / std::sqrt(var));
        else
            estimate.value = (b[0] >= 0.0) ? 1.0 : 0.0;
        return estimate;
    }

    Eigen::MatrixXd cov = 0.5 * (problem.covariance + problem.covariance.transpose());
    const auto fact = detail::genz_reorder_cholesky(std::move(cov), std::move(b));
    const std::vector<double> lattice = detail::prime_sqrts(n - 1);

    const int points = std::max(1, problem.sample_budget);
    const int reps = std::max(2, problem.replicates);
    std::vector<double> rep_means(reps, 0.0);
    std::vector<double> shift(n - 1), z(n - 1);

    for (int rep = 0; rep < reps; ++rep)
    {
        auto rng = Xoshiro256pp::for_substream(problem.rng_seed, std::uint64_t(rep));
        for (double &delta : shift)
            delta = rng.uniform01();

        double sum = 0.0;
        for (int k = 1; k <= points; ++k)
        {
            double prob = 1.0;
            for (int i = 0; i < n && prob > 0.0; ++i)
            {
                double num = fact.limits[i];
                for (int j = 0; j < i; ++j)
                    num -= fact.lower(i, j) * z[j];
                const double lii = fact.lower(i, i);
                double e;
                if (lii > 0.0)
                    e = normal_cdf(num / lii);
                else
                    e = (num >= 0.0) ? 1.0 : 0.0;
                prob *= e;
                if (i < n - 1)
                {
                    double u = double(k) * lattice[i] + shift[i];
                    u = std::abs(2.0 * (u - std::floor(u)) - 1.0);
                    const double arg = std::clamp(u * e, 1e-300, 1.0 - 1e-16);
                    z[i] = normal_quantile(arg);
                }
            }
            sum += prob;
        }
        rep_means[rep] = sum / points;
    }

    MvnEstimate estimate;
    for (double m : rep_means)
        estimate.value += m;
    estimate.value /= reps;
    double ss = 0.0;
    for (double m : rep_means)
        ss += (m - estimate.value) * (m - estimate.value);
    estimate.error_estimate = std::sqrt(ss / (double(reps) * (reps - 1)));
    estimate.value = std::clamp(estimate.value, 0.0, 1.0);
    return estimate;
}

} // namespace fasris

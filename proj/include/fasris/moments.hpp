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

#include <cmath>

#include "fasris/correlation.hpp"
#include "fasris/errors.hpp"

namespace fasris
{

// Link budget of the cascaded channel: M surface elements, average gains of the
// BS-to-surface and surface-to-user hops.
struct LinkBudget
{
    int num_elements = 40;        // M
    double gain_bs_ris = 2.5e-5;  // eps_1
    double gain_ris_user = 2.5e-5; // eps_2
};

// Mean and variance of the Gaussian surrogate for the per-port combined channel.
struct GammaMoments
{
    double mean = 0.0;     // E_gamma
    double variance = 0.0; // V_gamma
};

// Combined-channel correlation coefficients of the block model.
struct EtaCoefficients
{
    double rho0 = 0.0; // eta(0), the inter-block floor
    double rho1 = 0.0; // eta(mu)
};

// Closed-form surrogate moments:
//   E_gamma = M pi sqrt(eps1 eps2) / 4,   V_gamma = M eps1 eps2 (1 - pi^2/16).
inline GammaMoments gamma_moments(const LinkBudget &budget)
{
    if (budget.num_elements < 1)
        throw config_error("budget.num_elements", "must be at least 1");
    if (budget.gain_bs_ris <= 0.0 || budget.gain_ris_user <= 0.0)
        throw config_error("budget.gain", "link gains must be positive");
    GammaMoments moments;
    moments.mean = budget.num_elements * M_PI *
                   std::sqrt(budget.gain_bs_ris * budget.gain_ris_user) / 4.0;
    moments.variance = budget.num_elements * budget.gain_bs_ris * budget.gain_ris_user *
                       (1.0 - M_PI * M_PI / 16.0);
    return moments;
}

/*!
 * Cross moment E(|v_k||v_l|) of two complex Gaussian envelopes with unit power `gain`
 * and complex correlation g:
 *
 *   (pi gain / 4) * 2F1(-1/2, -1/2; 1; g^2)
 *
 * The series for 2F1(-1/2,-1/2;1;x) has nonnegative coefficients decaying like n^-3;
 * terms are accumulated until they drop below 1e-14 relative. |g| = 1 returns the exact
 * endpoint value `gain`.
 */
inline double envelope_cross_moment(double g, double gain)
{
    if (std::abs(g) > 1.0 + 1e-12)
        throw numeric_error("envelope_cross_moment: |g| must not exceed 1");
    const double x = std::min(g * g, 1.0);
    if (x >= 1.0)
        return gain;

    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 100000; ++n)
    {
        const double ratio = (n - 0.5) * (n - 0.5) / ((n + 1.0) * (n + 1.0));
        term *= ratio * x;
        sum += term;
        if (term < 1e-14 * sum)
            break;
    }
    return 0.25 * M_PI * gain * sum;
}

// Pearson correlation between the combined channels of two ports whose complex port
// correlation is g. Independent of M and the link gains; range [pi/(4+pi), 1].
inline double eta(double g)
{
    constexpr double pi2_16 = M_PI * M_PI / 16.0;
    return (envelope_cross_moment(g, 1.0) - pi2_16) / (1.0 - pi2_16);
}

inline EtaCoefficients eta_coefficients(double mu)
{
    if (mu <= 0.0 || mu >= 1.0)
        throw config_error("mu", "must lie strictly in (0, 1)");
    return {eta(0.0), eta(mu)};
}

// Diagnostics from a PSD repair pass.
struct PsdRepairInfo
{
    bool repaired = false;
    double min_eigenvalue = 0.0;
};

/*!
 * Maps the port matrix Sigma entrywise through eta to produce the combined-channel
 * correlation matrix Omega. Entrywise eta of a PSD matrix is PSD here (the 2F1 series
 * has nonnegative coefficients, so eta(Sigma) is a positive combination of Hadamard
 * powers), but the result is still verified and clip-repaired if numerics disagree;
 * `info`, when given, records whether repair ran.
 */
inline CorrelationMatrix build_omega(const CorrelationMatrix &sigma,
                                     PsdRepairInfo *info = nullptr)
{
    const Eigen::Index n = sigma.rows();
    CorrelationMatrix omega(n, n);
    for (Eigen::Index row = 0; row < n; ++row)
    {
        omega(row, row) = 1.0;
        for (Eigen::Index col = row + 1; col < n; ++col)
        {
            const double value = eta(sigma(row, col));
            omega(row, col) = value;
            omega(col, row) = value;
        }
    }

    if (info)
        *info = PsdRepairInfo{};
    if (n > 1)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(omega);
        const double min_eig = solver.eigenvalues().minCoeff();
        const double tol = 1e-10 * double(n);
        if (info)
            info->min_eigenvalue = min_eig;
        if (min_eig < -tol)
        {
            Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
            omega = solver.eigenvectors() * clipped.asDiagonal() *
                    solver.eigenvectors().transpose();
            omega = 0.5 * (omega + omega.transpose()).eval();
            if (info)
                info->repaired = true;
        }
    }
    return omega;
}

// Block form of Omega: diagonal blocks with off-diagonal rho1 = eta(mu), all
// cross-block entries rho0 = eta(0).
inline CorrelationMatrix build_omega_hat(const BlockSpec &spec)
{
    const EtaCoefficients coeffs = eta_coefficients(spec.intra_block_mu);
    const int n = spec.total_ports();
    CorrelationMatrix omega(n, n);
    omega.setConstant(coeffs.rho0);
    int offset = 0;
    for (int size : spec.block_sizes)
    {
        omega.block(offset, offset, size, size).setConstant(coeffs.rho1);
        offset += size;
    }
    omega.diagonal().setOnes();
    return omega;
}

} // namespace fasris

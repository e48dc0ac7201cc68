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

namespace fasris
{

// Fluid-antenna geometry: N ports spread evenly over an aperture of W wavelengths.
struct PortGeometry
{
    int num_ports = 1;        // N
    double normalized_size = 1.0; // W
};

// Symmetric unit-diagonal correlation matrix (port matrix Sigma, combined-channel
// matrices Omega and Omega-hat all use this shape).
using CorrelationMatrix = Eigen::MatrixXd;

// Eigenvalues sorted descending plus their sum.
struct EigenSpectrum
{
    Eigen::VectorXd values;
    double total_mass = 0.0;
};

// Result of thresholding the spectrum into a block count.
struct BlockSelection
{
    int num_blocks = 1;             // D
    bool threshold_above_max = false; // no eigenvalue reached the threshold; clamped to 1
};

// Fitted block-correlation structure: D equicorrelated blocks of sizes L_d with
// intra-block coefficient mu, selected at eigenvalue threshold lambda_th.
struct BlockSpec
{
    int num_blocks = 1;               // D
    std::vector<int> block_sizes;     // L_1 >= ... >= L_D, summing to N
    double intra_block_mu = 0.9;      // mu
    double eigen_threshold = 0.1;     // lambda_th

    int total_ports() const
    {
        int total = 0;
        for (int size : block_sizes)
            total += size;
        return total;
    }
};

/*!
 * Spatial correlation between two ports `delta` positions apart (3D Clarke model):
 *   g(delta) = sinc(2 pi delta W / (N-1)),  sinc(x) = sin(x)/x.
 * Returns 1 for delta = 0 and, by convention, for the degenerate N = 1 geometry.
 */
inline double port_correlation(int delta, const PortGeometry &geometry)
{
    if (delta == 0 || geometry.num_ports <= 1)
        return 1.0;
    const double x = 2.0 * M_PI * std::abs(delta) * geometry.normalized_size /
                     (geometry.num_ports - 1);
    return std::sin(x) / x;
}

namespace detail
{

inline void check_symmetric_spectrum(const Eigen::MatrixXd &matrix, double min_eigenvalue)
{
    const double tol = 1e-10 * double(matrix.rows());
    if (min_eigenvalue < -tol)
        throw numeric_error("correlation matrix is indefinite: min eigenvalue " +
                            std::to_string(min_eigenvalue));
}

} // namespace detail

/*!
 * Builds the N x N symmetric Toeplitz port-correlation matrix from the geometry.
 * Validates positive semidefiniteness up to numerical tolerance.
 */
inline CorrelationMatrix build_sigma(const PortGeometry &geometry)
{
    if (geometry.num_ports < 1)
        throw config_error("geometry.num_ports", "must be at least 1");
    if (geometry.normalized_size <= 0.0)
        throw config_error("geometry.normalized_size", "must be positive");

    const int n = geometry.num_ports;
    CorrelationMatrix sigma(n, n);
    std::vector<double> first_row(n);
    for (int delta = 0; delta < n; ++delta)
        first_row[delta] = port_correlation(delta, geometry);
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col)
            sigma(row, col) = first_row[std::abs(row - col)];

    if (n > 1)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma,
                                                              Eigen::EigenvaluesOnly);
        detail::check_symmetric_spectrum(sigma, solver.eigenvalues().minCoeff());
    }
    return sigma;
}

// Eigenvalues of a symmetric matrix, sorted descending.
inline EigenSpectrum eigen_spectrum(const CorrelationMatrix &matrix)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eigen_spectrum: eigensolver did not converge");
    EigenSpectrum spectrum;
    spectrum.values = solver.eigenvalues().reverse();
    spectrum.total_mass = spectrum.values.sum();
    return spectrum;
}

// D = |{lambda_n >= lambda_th}|, clamped to [1, N]. A threshold above the largest
// eigenvalue yields D = 1 with the warning flag set.
inline BlockSelection select_block_count(const EigenSpectrum &spectrum, double eigen_threshold)
{
    if (eigen_threshold <= 0.0)
        throw config_error("eigen_threshold", "must be positive");
    int count = 0;
    for (Eigen::Index i = 0; i < spectrum.values.size(); ++i)
        if (spectrum.values[i] >= eigen_threshold)
            ++count;
    BlockSelection selection;
    selection.threshold_above_max = (count == 0);
    selection.num_blocks = std::clamp(count, 1, int(spectrum.values.size()));
    return selection;
}

// Alternative block-count rule: smallest D whose leading eigenvalues capture at least
// `mass_fraction` of the total mass.
inline int select_block_count_by_mass(const EigenSpectrum &spectrum, double mass_fraction)
{
    if (mass_fraction <= 0.0 || mass_fraction > 1.0)
        throw config_error("mass_fraction", "must lie in (0, 1]");
    const double target = mass_fraction * spectrum.total_mass;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < spectrum.values.size(); ++i)
    {
        cumulative += spectrum.values[i];
        if (cumulative >= target)
            return int(i) + 1;
    }
    return int(spectrum.values.size());
}

/*!
 * Analytic spectrum of the block-diagonal model: each size-L block with constant
 * correlation mu contributes one eigenvalue 1+(L-1)mu and L-1 copies of 1-mu.
 * Total mass is exactly the port count.
 */
inline EigenSpectrum block_model_spectrum(const BlockSpec &spec)
{
    std::vector<double> values;
    values.reserve(spec.total_ports());
    for (int size : spec.block_sizes)
    {
        values.push_back(1.0 + (size - 1) * spec.intra_block_mu);
        for (int i = 1; i < size; ++i)
            values.push_back(1.0 - spec.intra_block_mu);
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    EigenSpectrum spectrum;
    spectrum.values = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
    spectrum.total_mass = double(spec.total_ports());
    return spectrum;
}

// Sum of squared differences between two descending-sorted eigenvalue vectors.
inline double spectral_distance(const EigenSpectrum &a, const EigenSpectrum &b)
{
    if (a.values.size() != b.values.size())
        throw numeric_error("spectral_distance: spectra have different lengths");
    return (a.values - b.values).squaredNorm();
}

namespace detail
{

inline double sizes_distance(std::vector<int> sizes, const BlockSpec &proto,
                             const EigenSpectrum &target)
{
    BlockSpec candidate = proto;
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    candidate.block_sizes = std::move(sizes);
    return spectral_distance(block_model_spectrum(candidate), target);
}

} // namespace detail

/*!
 * Fits block sizes L_1..L_D (summing to `total`) so the block-model spectrum is closest
 * to `spectrum` in the sorted-eigenvalue least-squares distance.
 *
 * Greedy pass: L_d matches the d-th principal eigenvalue via 1+(L_d-1)mu, clamped so the
 * remaining blocks stay feasible; the last block absorbs the remainder. A local
 * refinement then applies single-port transfers between block pairs while the distance
 * decreases. Verified against exhaustive composition search (see the test suite).
 */
inline BlockSpec fit_block_sizes(const EigenSpectrum &spectrum, int num_blocks, double mu,
                                 int total)
{
    if (num_blocks < 1 || num_blocks > total)
        throw config_error("num_blocks", "must lie in [1, N]");
    if (mu <= 0.0 || mu >= 1.0)
        throw config_error("mu", "must lie strictly in (0, 1)");
    if (spectrum.values.size() != total)
        throw numeric_error("fit_block_sizes: spectrum length does not match port count");

    BlockSpec spec;
    spec.num_blocks = num_blocks;
    spec.intra_block_mu = mu;

    std::vector<int> sizes;
    sizes.reserve(num_blocks);
    int remaining = total;
    for (int d = 0; d < num_blocks - 1; ++d)
    {
        int size = int(std::lround((spectrum.values[d] - 1.0) / mu)) + 1;
        size = std::clamp(size, 1, remaining - (num_blocks - 1 - d));
        sizes.push_back(size);
        remaining -= size;
    }
    sizes.push_back(remaining);

    bool improved = true;
    double best = detail::sizes_distance(sizes, spec, spectrum);
    while (improved)
    {
        improved = false;
        int best_from = -1, best_to = -1;
        for (int from = 0; from < num_blocks; ++from)
        {
            if (sizes[from] <= 1)
                continue;
            for (int to = 0; to < num_blocks; ++to)
            {
                if (to == from)
                    continue;
                std::vector<int> candidate = sizes;
                --candidate[from];
                ++candidate[to];
                const double dist = detail::sizes_distance(candidate, spec, spectrum);
                if (dist < best - 1e-12)
                {
                    best = dist;
                    best_from = from;
                    best_to = to;
                }
            }
        }
        if (best_from >= 0)
        {
            --sizes[best_from];
            ++sizes[best_to];
            improved = true;
        }
    }

    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    spec.block_sizes = std::move(sizes);
    return spec;
}

} // namespace fasris

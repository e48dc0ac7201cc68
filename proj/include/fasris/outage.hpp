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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "fasris/correlation.hpp"
#include "fasris/errors.hpp"
#include "fasris/moments.hpp"
#include "fasris/mvn.hpp"
#include "fasris/quadrature.hpp"

namespace fasris
{

// Radio-link parameters defining the outage threshold.
struct RadioParams
{
    double transmit_power = 0.1; // P_S, watt
    double noise_power = 1e-8;   // sigma_n^2, watt
    double target_rate = 3.0;    // R, bit/s/Hz
};

// Everything that defines one physical operating point.
struct SystemConfig
{
    PortGeometry geometry{20, 1.0};
    LinkBudget budget;
    RadioParams radio;
};

// Lambda_th = sqrt((2^R - 1) sigma_n^2 / P_S): the combined-channel level below which
// the selected port cannot sustain the target rate.
inline double outage_threshold(const RadioParams &params)
{
    if (params.transmit_power <= 0.0)
        throw config_error("radio.transmit_power", "must be positive");
    if (params.noise_power <= 0.0)
        throw config_error("radio.noise_power", "must be positive");
    if (params.target_rate < 0.0)
        throw config_error("radio.target_rate", "must be nonnegative");
    return std::sqrt((std::exp2(params.target_rate) - 1.0) * params.noise_power /
                     params.transmit_power);
}

enum class Estimator
{
    clt,
    clt_bc,
    clt_iid,
    monte_carlo
};

inline std::string_view estimator_name(Estimator estimator)
{
    switch (estimator)
    {
    case Estimator::clt:
        return "CLT";
    case Estimator::clt_bc:
        return "CLT-BC";
    case Estimator::clt_iid:
        return "CLT-IID";
    case Estimator::monte_carlo:
        return "MC";
    }
    return "?";
}

// Knobs shared by the analytical estimators.
struct EstimatorSettings
{
    int chebyshev_nodes = 100;     // U
    TruncationPolicy truncation{}; // adaptive 10-sigma windows by default
    double mu = 0.9;
    double eigen_threshold = 0.1; // lambda_th
    bool mass_fraction_mode = false;
    double mass_fraction = 0.95;
    std::uint64_t mvn_seed = 0x2545f4914f6cdd1dULL;
    int mvn_sample_budget = 1 << 14;
    int mvn_replicates = 8;
    std::optional<std::vector<int>> explicit_blocks; // bypass the fit entirely
    std::optional<double> threshold_override;        // evaluate at y != Lambda_th
};

struct OutageResult
{
    Estimator estimator = Estimator::clt;
    double probability = 0.0;
    double error_estimate = 0.0;
    double wall_time_ms = 0.0;
    double raw_value = 0.0; // pre-clamp quadrature value
    bool clamped = false;
};

// Block structure chosen for a geometry, with fit diagnostics.
struct BlockFitReport
{
    BlockSpec spec;
    EigenSpectrum spectrum;
    BlockSelection selection;
    double distance = 0.0;
};

// Builds Sigma, thresholds its spectrum into D blocks (or takes explicit sizes), and
// fits the block sizes.
inline BlockFitReport fit_blocks_for_geometry(const PortGeometry &geometry,
                                              const EstimatorSettings &settings)
{
    BlockFitReport report;
    report.spectrum = eigen_spectrum(build_sigma(geometry));

    if (settings.explicit_blocks)
    {
        BlockSpec spec;
        spec.block_sizes = *settings.explicit_blocks;
        spec.num_blocks = int(spec.block_sizes.size());
        spec.intra_block_mu = settings.mu;
        spec.eigen_threshold = settings.eigen_threshold;
        if (spec.total_ports() != geometry.num_ports)
            throw config_error("explicit_blocks", "sizes must sum to the port count");
        report.spec = std::move(spec);
        report.selection = {report.spec.num_blocks, false};
    }
    else
    {
        if (settings.mass_fraction_mode)
            report.selection = {select_block_count_by_mass(report.spectrum,
                                                           settings.mass_fraction),
                                false};
        else
            report.selection = select_block_count(report.spectrum, settings.eigen_threshold);
        report.spec = fit_block_sizes(report.spectrum, report.selection.num_blocks,
                                      settings.mu, geometry.num_ports);
        report.spec.eigen_threshold = settings.eigen_threshold;
    }
    report.distance = spectral_distance(block_model_spectrum(report.spec), report.spectrum);
    return report;
}

/*!
 * CDF of one block member conditioned on its block variable x_d and the shared variable
 * x_0 (both centered):
 *
 *   1/2 (1 + erf((y - E_gamma - x_d - x_0) / sqrt(2 V_gamma (1 - rho1))))
 */
inline double block_conditional_cdf(double y, double x_d, double x_0,
                                    const GammaMoments &moments, double rho0, double rho1)
{
    if (!(rho0 < rho1 && rho1 < 1.0))
        throw numeric_error("block_conditional_cdf: need rho0 < rho1 < 1");
    const double spread = std::sqrt(2.0 * moments.variance * (1.0 - rho1));
    return 0.5 * (1.0 + std::erf((y - moments.mean - x_d - x_0) / spread));
}

/*!
 * Block-correlation CDF of the best-port channel at level y:
 *
 *   F(y) = E_w[ prod_d E_{r_d}[ block_conditional_cdf(y, r_d, w - E_gamma)^{L_d} ] ]
 *
 * with w ~ N(E_gamma, V rho0) shared by every port and r_d ~ N(0, V (rho1 - rho0)) shared
 * within block d. Both expectations are truncated Gauss-Chebyshev quadratures; the inner
 * integral is evaluated once per distinct block size, so the cost is
 * O(U^2 x distinct sizes).
 */
inline double clt_bc_cdf(double y, const BlockSpec &spec, const GammaMoments &moments,
                         const EtaCoefficients &coeffs, const EstimatorSettings &settings)
{
    const double rho0 = coeffs.rho0;
    const double rho1 = coeffs.rho1;
    if (rho1 <= rho0)
        throw numeric_error("clt_bc_cdf: decomposition requires rho1 > rho0");

    const double variance = moments.variance;
    const double sigma_shared = std::sqrt(variance * rho0);
    const double sigma_block = std::sqrt(variance * (rho1 - rho0));
    const auto rule = ChebyshevRule::make(settings.chebyshev_nodes);
    const auto outer_window = settings.truncation.window(0.0, sigma_shared);
    const auto inner_window = settings.truncation.window(0.0, sigma_block);

    std::map<int, double> inner_by_size;
    for (int size : spec.block_sizes)
        inner_by_size[size] = 0.0;

    const double inv_shared = 1.0 / (2.0 * variance * rho0);
    const double norm_shared = 1.0 / std::sqrt(2.0 * M_PI * variance * rho0);
    const double inv_block = 1.0 / (2.0 * variance * (rho1 - rho0));
    const double norm_block = 1.0 / std::sqrt(2.0 * M_PI * variance * (rho1 - rho0));

    const double outer = integrate_truncated(
        [&](double x0) {
            for (auto &[size, value] : inner_by_size)
            {
                value = integrate_truncated(
                    [&](double xd) {
                        const double cond =
                            block_conditional_cdf(y, xd, x0, moments, rho0, rho1);
                        return norm_block * std::exp(-xd * xd * inv_block) *
                               std::pow(cond, double(size));
                    },
                    inner_window, rule);
            }
            double product = 1.0;
            for (int size : spec.block_sizes)
                product *= inner_by_size[size];
            return norm_shared * std::exp(-x0 * x0 * inv_shared) * product;
        },
        outer_window, rule);
    return outer;
}

/*!
 * Independent-blocks CDF: D channels that share only the common variable b_0,
 *
 *   F(y) = E_{b_0 ~ N(0, V)}[ Phi((y - E - sqrt(rho0) b_0) / sqrt(V (1 - rho0)))^D ]
 *
 * This is the exact limit of clt_bc_cdf when every block has size one.
 */
inline double clt_iid_cdf(double y, int num_blocks, const GammaMoments &moments,
                          double rho0, const EstimatorSettings &settings)
{
    if (num_blocks < 1)
        throw numeric_error("clt_iid_cdf: need at least one block");
    if (rho0 < 0.0 || rho0 >= 1.0)
        throw numeric_error("clt_iid_cdf: rho0 must lie in [0, 1)");

    const double variance = moments.variance;
    const double sigma = std::sqrt(variance);
    const double root_rho = std::sqrt(rho0);
    const double spread = std::sqrt(2.0 * variance * (1.0 - rho0));
    const auto rule = ChebyshevRule::make(settings.chebyshev_nodes);
    const auto window = settings.truncation.window(0.0, sigma);

    const double inv_var = 1.0 / (2.0 * variance);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * variance);

    return integrate_truncated(
        [&](double b0) {
            const double cond =
                0.5 * (1.0 + std::erf((y - moments.mean - root_rho * b0) / spread));
            return norm * std::exp(-b0 * b0 * inv_var) * std::pow(cond, double(num_blocks));
        },
        window, rule);
}

namespace detail
{

class StopWatch
{
  public:
    double elapsed_ms() const
    {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline OutageResult finish(Estimator estimator, double raw, double error,
                           const StopWatch &watch)
{
    OutageResult result;
    result.estimator = estimator;
    result.raw_value = raw;
    result.probability = std::clamp(raw, 0.0, 1.0);
    result.clamped = (result.probability != raw);
    result.error_estimate = error;
    result.wall_time_ms = watch.elapsed_ms();
    return result;
}

} // namespace detail

// Full-correlation estimator: the multivariate normal CDF of the Gaussian surrogate
// at y = Lambda_th, with mean E_gamma and covariance V_gamma * Omega.
inline OutageResult outage_clt(const PortGeometry &geometry, const LinkBudget &budget,
                               const RadioParams &params,
                               const EstimatorSettings &settings = {})
{
    detail::StopWatch watch;
    const double y = settings.threshold_override.value_or(outage_threshold(params));
    const GammaMoments moments = gamma_moments(budget);
    const CorrelationMatrix omega = build_omega(build_sigma(geometry));

    MvnProblem problem;
    problem.upper_limit = y;
    problem.mean = Eigen::VectorXd::Constant(geometry.num_ports, moments.mean);
    problem.covariance = moments.variance * omega;
    problem.rng_seed = settings.mvn_seed;
    problem.sample_budget = settings.mvn_sample_budget;
    problem.replicates = settings.mvn_replicates;

    const MvnEstimate estimate = mvn_cdf(problem);
    return detail::finish(Estimator::clt, estimate.value, estimate.error_estimate, watch);
}

// Block-correlation estimator.
inline OutageResult outage_clt_bc(const PortGeometry &geometry, const LinkBudget &budget,
                                  const RadioParams &params,
                                  const EstimatorSettings &settings = {})
{
    detail::StopWatch watch;
    const double y = settings.threshold_override.value_or(outage_threshold(params));
    const GammaMoments moments = gamma_moments(budget);
    const auto fit = fit_blocks_for_geometry(geometry, settings);
    const EtaCoefficients coeffs = eta_coefficients(settings.mu);
    const double raw = clt_bc_cdf(y, fit.spec, moments, coeffs, settings);
    return detail::finish(Estimator::clt_bc, raw, 0.0, watch);
}

// Independent-blocks estimator.
inline OutageResult outage_clt_iid(const PortGeometry &geometry, const LinkBudget &budget,
                                   const RadioParams &params,
                                   const EstimatorSettings &settings = {})
{
    detail::StopWatch watch;
    const double y = settings.threshold_override.value_or(outage_threshold(params));
    const GammaMoments moments = gamma_moments(budget);
    const auto fit = fit_blocks_for_geometry(geometry, settings);
    const double rho0 = eta(0.0);
    const double raw = clt_iid_cdf(y, fit.spec.num_blocks, moments, rho0, settings);
    return detail::finish(Estimator::clt_iid, raw, 0.0, watch);
}

inline OutageResult outage_clt(const SystemConfig &config,
                               const EstimatorSettings &settings = {})
{
    return outage_clt(config.geometry, config.budget, config.radio, settings);
}

inline OutageResult outage_clt_bc(const SystemConfig &config,
                                  const EstimatorSettings &settings = {})
{
    return outage_clt_bc(config.geometry, config.budget, config.radio, settings);
}

inline OutageResult outage_clt_iid(const SystemConfig &config,
                                   const EstimatorSettings &settings = {})
{
    return outage_clt_iid(config.geometry, config.budget, config.radio, settings);
}

} // namespace fasris

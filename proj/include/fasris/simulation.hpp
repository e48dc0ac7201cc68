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
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "fasris/errors.hpp"
#include "fasris/mvn.hpp"
#include "fasris/outage.hpp"
#include "fasris/rng.hpp"

namespace fasris::sim
{

struct SimPlan
{
    SystemConfig config;
    std::uint64_t num_trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 65'536; // trials claimed per worker grab
    int num_workers = 1;
    std::optional<double> threshold_override;
};

struct SimEstimate
{
    double outage_probability = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t outage_count = 0;
    double mean_gamma = 0.0; // single-port marginal, pooled over all ports
    double var_gamma = 0.0;
    double wall_time_ms = 0.0;
};

// Precomputed per-trial machinery: the coloring factor for the RIS-to-user gains and
// the outage threshold.
struct ChannelModel
{
    int num_elements = 0;
    int num_ports = 0;
    double threshold = 0.0;
    double scale_bs_ris = 0.0;      // sqrt(eps1 / 2) per real component
    Eigen::MatrixXd color_factor{}; // sqrt(eps2) * sqrt(Sigma)

    static ChannelModel make(const SystemConfig &config,
                             std::optional<double> threshold_override = {})
    {
        ChannelModel model;
        model.num_elements = config.budget.num_elements;
        model.num_ports = config.geometry.num_ports;
        model.threshold = threshold_override.value_or(outage_threshold(config.radio));
        if (config.budget.gain_bs_ris <= 0.0)
            throw config_error("budget.gain_bs_ris", "must be positive");
        if (config.budget.gain_ris_user <= 0.0)
            throw config_error("budget.gain_ris_user", "must be positive");
        model.scale_bs_ris = std::sqrt(config.budget.gain_bs_ris / 2.0);
        model.color_factor =
            std::sqrt(config.budget.gain_ris_user) * psd_sqrt(build_sigma(config.geometry));
        return model;
    }
};

/*!
 * Draws one channel realization and returns the per-port combined gains
 * gamma_k = sum_m |h_m| |v_{m,k}|. The BS-RIS vector h is drawn first (2M normals),
 * then the RIS-user matrix column by column (2NM normals), so a trial always consumes
 * its substream in the same order.
 */
inline Eigen::VectorXd sample_port_gains(Xoshiro256pp &rng, const ChannelModel &model,
                                         Eigen::MatrixXcd &scratch)
{
    const int m_count = model.num_elements;
    const int n_ports = model.num_ports;

    Eigen::VectorXd h_mag(m_count);
    for (int m = 0; m < m_count; ++m)
    {
        const double re = rng.normal() * model.scale_bs_ris;
        const double im = rng.normal() * model.scale_bs_ris;
        h_mag(m) = std::sqrt(re * re + im * im);
    }

    constexpr double inv_root2 = 0.7071067811865475244;
    scratch.resize(n_ports, m_count);
    for (int m = 0; m < m_count; ++m)
        for (int k = 0; k < n_ports; ++k)
            scratch(k, m) = std::complex<double>(rng.normal() * inv_root2,
                                                 rng.normal() * inv_root2);

    const Eigen::MatrixXcd colored = model.color_factor * scratch;
    return colored.array().abs2().sqrt().matrix() * h_mag;
}

namespace detail
{

// One 4096-trial accumulation block. Results are combined in block-index order, so the
// estimate is bit-identical for any worker count or chunk size.
constexpr std::uint64_t kBlockTrials = 4096;

struct BlockPartial
{
    std::uint64_t outage_count = 0;
    std::uint64_t port_samples = 0;
    double sum_gamma = 0.0;
    double sum_gamma_sq = 0.0;
};

inline BlockPartial run_block(const ChannelModel &model, std::uint64_t seed,
                              std::uint64_t first_trial, std::uint64_t last_trial)
{
    BlockPartial partial;
    Eigen::MatrixXcd scratch;
    for (std::uint64_t trial = first_trial; trial < last_trial; ++trial)
    {
        Xoshiro256pp rng = Xoshiro256pp::for_substream(seed, trial);
        const Eigen::VectorXd gains = sample_port_gains(rng, model, scratch);
        if (gains.maxCoeff() <= model.threshold)
            ++partial.outage_count;
        partial.port_samples += std::uint64_t(gains.size());
        partial.sum_gamma += gains.sum();
        partial.sum_gamma_sq += gains.squaredNorm();
    }
    return partial;
}

struct BinomialCi
{
    double low = 0.0;
    double high = 0.0;
};

// Normal-approximation interval, switching to Wilson when either tail count is small.
inline BinomialCi binomial_ci(std::uint64_t count, std::uint64_t trials)
{
    constexpr double z = 1.959963984540054; // two-sided 95%
    const double n = double(trials);
    const double p = double(count) / n;
    BinomialCi ci;
    if (std::min(count, trials - count) >= 30)
    {
        const double half = z * std::sqrt(p * (1.0 - p) / n);
        ci.low = p - half;
        ci.high = p + half;
    }
    else
    {
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double center = (p + z2 / (2.0 * n)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
        ci.low = center - half;
        ci.high = center + half;
    }
    // clamp to [0, 1] and keep the point estimate inside despite rounding
    ci.low = std::max(std::min(ci.low, p), 0.0);
    ci.high = std::min(std::max(ci.high, p), 1.0);
    return ci;
}

} // namespace detail

/*!
 * Exact Monte Carlo outage estimate. Trials are split into fixed 4096-trial blocks;
 * each block draws its trials from per-trial substreams and blocks are reduced in index
 * order, so the returned estimate depends only on (plan.config, num_trials, seed,
 * threshold), not on chunk_size or num_workers.
 */
inline SimEstimate empirical_outage(const SimPlan &plan)
{
    if (plan.num_trials == 0)
        throw config_error("sim.num_trials", "must be positive");
    if (plan.chunk_size == 0)
        throw config_error("sim.chunk_size", "must be positive");
    if (plan.num_workers < 1)
        throw config_error("sim.num_workers", "must be positive");

    const fasris::detail::StopWatch watch;
    const ChannelModel model = ChannelModel::make(plan.config, plan.threshold_override);

    const std::uint64_t num_blocks =
        (plan.num_trials + detail::kBlockTrials - 1) / detail::kBlockTrials;
    const std::uint64_t blocks_per_claim =
        std::max<std::uint64_t>(1, plan.chunk_size / detail::kBlockTrials);

    std::vector<detail::BlockPartial> partials(num_blocks);
    std::atomic<std::uint64_t> next_block{0};

    const auto worker = [&]() {
        for (;;)
        {
            const std::uint64_t begin = next_block.fetch_add(blocks_per_claim);
            if (begin >= num_blocks)
                return;
            const std::uint64_t end = std::min(begin + blocks_per_claim, num_blocks);
            for (std::uint64_t b = begin; b < end; ++b)
            {
                const std::uint64_t first = b * detail::kBlockTrials;
                const std::uint64_t last =
                    std::min(first + detail::kBlockTrials, plan.num_trials);
                partials[b] = detail::run_block(model, plan.seed, first, last);
            }
        }
    };

    const int spawn = int(std::min<std::uint64_t>(std::uint64_t(plan.num_workers), num_blocks));
    if (spawn <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(spawn));
        for (int t = 0; t < spawn; ++t)
            pool.emplace_back(worker);
        for (auto &thread : pool)
            thread.join();
    }

    detail::BlockPartial total;
    for (const auto &partial : partials)
    {
        total.outage_count += partial.outage_count;
        total.port_samples += partial.port_samples;
        total.sum_gamma += partial.sum_gamma;
        total.sum_gamma_sq += partial.sum_gamma_sq;
    }

    SimEstimate estimate;
    estimate.trials = plan.num_trials;
    estimate.outage_count = total.outage_count;
    estimate.outage_probability = double(total.outage_count) / double(plan.num_trials);
    const auto ci = detail::binomial_ci(total.outage_count, plan.num_trials);
    estimate.ci_low = ci.low;
    estimate.ci_high = ci.high;
    estimate.mean_gamma = total.sum_gamma / double(total.port_samples);
    estimate.var_gamma = total.sum_gamma_sq / double(total.port_samples) -
                         estimate.mean_gamma * estimate.mean_gamma;
    estimate.wall_time_ms = watch.elapsed_ms();
    return estimate;
}

struct CrossMomentEstimate
{
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

// Monte Carlo check of E[|v1||v2|] for jointly Gaussian v1, v2 with common variance
// `gain` and correlation g: v2 = g v1 + sqrt(1 - g^2) w.
inline CrossMomentEstimate empirical_cross_moment(double g, std::uint64_t trials,
                                                  std::uint64_t seed, double gain = 1.0)
{
    if (trials == 0)
        throw config_error("sim.num_trials", "must be positive");
    if (std::abs(g) > 1.0)
        throw numeric_error("empirical_cross_moment: |g| must not exceed 1");

    const double mix = std::sqrt(1.0 - g * g);
    const double scale = std::sqrt(gain / 2.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    Xoshiro256pp rng = Xoshiro256pp::seeded(seed);
    for (std::uint64_t trial = 0; trial < trials; ++trial)
    {
        const std::complex<double> x(rng.normal() * scale, rng.normal() * scale);
        const std::complex<double> w(rng.normal() * scale, rng.normal() * scale);
        const std::complex<double> y = g * x + mix * w;
        const double product = std::abs(x) * std::abs(y);
        sum += product;
        sum_sq += product * product;
    }
    CrossMomentEstimate estimate;
    estimate.trials = trials;
    estimate.value = sum / double(trials);
    const double var = sum_sq / double(trials) - estimate.value * estimate.value;
    estimate.std_error = std::sqrt(std::max(var, 0.0) / double(trials));
    return estimate;
}

// Adapter so simulation rows can sit next to analytical ones in sweep output. The error
// estimate is the 95% confidence half-width.
inline OutageResult as_outage_result(const SimEstimate &estimate)
{
    OutageResult result;
    result.estimator = Estimator::monte_carlo;
    result.probability = estimate.outage_probability;
    result.raw_value = estimate.outage_probability;
    result.error_estimate = 0.5 * (estimate.ci_high - estimate.ci_low);
    result.wall_time_ms = estimate.wall_time_ms;
    result.clamped = false;
    return result;
}

} // namespace fasris::sim

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

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fasris/config.hpp"
#include "fasris/errors.hpp"
#include "fasris/outage.hpp"
#include "fasris/simulation.hpp"

namespace fasris
{

// One output record: the operating point plus one estimator's answer at it.
struct ResultRow
{
    Estimator estimator = Estimator::clt;
    int num_elements = 0;
    int num_ports = 0;
    double normalized_size = 0.0;
    double target_rate = 0.0;
    double transmit_power = 0.0;
    double noise_power = 0.0;
    double threshold = 0.0;
    double probability = 0.0;
    double error_estimate = 0.0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
};

enum class SweepKind
{
    point,
    ports,
    size,
    elements
};

struct SweepAxis
{
    SweepKind kind = SweepKind::point;
    std::vector<int> int_values;     // ports or elements
    std::vector<double> real_values; // normalized sizes

    static SweepAxis point()
    {
        return {};
    }
    static SweepAxis ports(std::vector<int> values)
    {
        return {SweepKind::ports, std::move(values), {}};
    }
    static SweepAxis size(std::vector<double> values)
    {
        return {SweepKind::size, {}, std::move(values)};
    }
    static SweepAxis elements(std::vector<int> values)
    {
        return {SweepKind::elements, std::move(values), {}};
    }

    std::size_t num_points() const
    {
        switch (kind)
        {
        case SweepKind::point:
            return 1;
        case SweepKind::size:
            return real_values.size();
        default:
            return int_values.size();
        }
    }
};

struct SkipRecord
{
    Estimator estimator = Estimator::clt;
    int num_elements = 0;
    int num_ports = 0;
    double normalized_size = 0.0;
    std::string reason{};
};

struct SweepResult
{
    std::vector<ResultRow> rows;
    std::vector<SkipRecord> skipped;
};

namespace detail
{

inline ExperimentConfig apply_axis(ExperimentConfig config, const SweepAxis &axis,
                                   std::size_t index)
{
    switch (axis.kind)
    {
    case SweepKind::point:
        break;
    case SweepKind::ports:
        config.num_ports = axis.int_values[index];
        break;
    case SweepKind::size:
        config.normalized_size = axis.real_values[index];
        break;
    case SweepKind::elements:
        config.num_elements = axis.int_values[index];
        break;
    }
    return config;
}

inline ResultRow make_row(const ExperimentConfig &point, Estimator estimator,
                          double threshold, const OutageResult &outcome,
                          std::uint64_t seed)
{
    ResultRow row;
    row.estimator = estimator;
    row.num_elements = point.num_elements;
    row.num_ports = point.num_ports;
    row.normalized_size = point.normalized_size;
    row.target_rate = point.target_rate;
    row.transmit_power = point.transmit_power;
    row.noise_power = point.noise_power;
    row.threshold = threshold;
    row.probability = outcome.probability;
    row.error_estimate = outcome.error_estimate;
    row.wall_time_ms = point.stable_output ? 0.0 : outcome.wall_time_ms;
    row.seed = seed;
    return row;
}

} // namespace detail

/*!
 * Evaluates every configured estimator over the sweep axis. Rows come out
 * estimator-major in axis order. The simulator reuses the same seed at every point, so
 * sweep curves share their random numbers. CLT points whose dimension exceeds the
 * configured cap are recorded as skipped instead of evaluated.
 */
inline SweepResult run_sweep(const ExperimentConfig &base, const SweepAxis &axis)
{
    base.validate();
    const std::size_t num_points = axis.num_points();
    if (num_points == 0)
        throw config_error("sweep", "axis has no points");

    SweepResult result;
    for (Estimator estimator : base.estimators)
    {
        for (std::size_t i = 0; i < num_points; ++i)
        {
            const ExperimentConfig point = detail::apply_axis(base, axis, i);
            EstimatorSettings settings = point.estimator_settings();
            if (point.scale_threshold_to_mean)
                settings.threshold_override =
                    gamma_moments(point.system().budget).mean;
            const double threshold =
                settings.threshold_override.value_or(outage_threshold(point.system().radio));

            if (estimator == Estimator::clt && point.num_ports > point.mvn_dimension_cap)
            {
                result.skipped.push_back({estimator, point.num_elements, point.num_ports,
                                          point.normalized_size, "skipped: dimension"});
                continue;
            }

            switch (estimator)
            {
            case Estimator::clt:
                result.rows.push_back(detail::make_row(
                    point, estimator, threshold,
                    outage_clt(point.system(), settings), settings.mvn_seed));
                break;
            case Estimator::clt_bc:
                result.rows.push_back(detail::make_row(
                    point, estimator, threshold,
                    outage_clt_bc(point.system(), settings), 0));
                break;
            case Estimator::clt_iid:
                result.rows.push_back(detail::make_row(
                    point, estimator, threshold,
                    outage_clt_iid(point.system(), settings), 0));
                break;
            case Estimator::monte_carlo:
            {
                sim::SimPlan plan = point.sim_plan();
                plan.threshold_override = settings.threshold_override;
                result.rows.push_back(detail::make_row(
                    point, estimator, threshold,
                    sim::as_outage_result(sim::empirical_outage(plan)), plan.seed));
                break;
            }
            }
        }
    }
    return result;
}

inline constexpr const char *kCsvHeader =
    "estimator,M,N,W,R,P_S,sigma2,threshold,probability,error_estimate,wall_time_ms,seed";

namespace detail
{

inline std::string format_double(double value)
{
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17e", value);
    return buffer;
}

} // namespace detail

// Writes rows in the fixed column schema. All doubles are printed with 17 significant
// digits so parse_csv followed by emit_csv reproduces the file byte for byte.
inline void emit_csv(const std::vector<ResultRow> &rows, std::ostream &out)
{
    out << kCsvHeader << '\n';
    for (const ResultRow &row : rows)
    {
        out << estimator_name(row.estimator) << ',' << row.num_elements << ','
            << row.num_ports << ',' << detail::format_double(row.normalized_size) << ','
            << detail::format_double(row.target_rate) << ','
            << detail::format_double(row.transmit_power) << ','
            << detail::format_double(row.noise_power) << ','
            << detail::format_double(row.threshold) << ','
            << detail::format_double(row.probability) << ','
            << detail::format_double(row.error_estimate) << ','
            << detail::format_double(row.wall_time_ms) << ',' << row.seed << '\n';
    }
}

inline void emit_jsonl(const std::vector<ResultRow> &rows, std::ostream &out)
{
    for (const ResultRow &row : rows)
    {
        nlohmann::ordered_json record;
        record["estimator"] = std::string(estimator_name(row.estimator));
        record["M"] = row.num_elements;
        record["N"] = row.num_ports;
        record["W"] = row.normalized_size;
        record["R"] = row.target_rate;
        record["P_S"] = row.transmit_power;
        record["sigma2"] = row.noise_power;
        record["threshold"] = row.threshold;
        record["probability"] = row.probability;
        record["error_estimate"] = row.error_estimate;
        record["wall_time_ms"] = row.wall_time_ms;
        record["seed"] = row.seed;
        out << record.dump() << '\n';
    }
}

inline std::vector<ResultRow> parse_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line))
        throw config_error("csv", "empty input");
    if (line == std::string(kCsvHeader) + "\r")
        line.pop_back();
    if (line != kCsvHeader)
        throw config_error("csv", "unexpected header '" + line + "'");

    std::vector<ResultRow> rows;
    std::size_t line_number = 1;
    while (std::getline(in, line))
    {
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        std::vector<std::string> fields;
        std::stringstream splitter(line);
        std::string field;
        while (std::getline(splitter, field, ','))
            fields.push_back(field);
        if (fields.size() != 12)
            throw config_error("csv", "line " + std::to_string(line_number) +
                                          ": expected 12 fields, got " +
                                          std::to_string(fields.size()));
        try
        {
            ResultRow row;
            row.estimator = parse_estimator(fields[0]);
            row.num_elements = std::stoi(fields[1]);
            row.num_ports = std::stoi(fields[2]);
            row.normalized_size = std::stod(fields[3]);
            row.target_rate = std::stod(fields[4]);
            row.transmit_power = std::stod(fields[5]);
            row.noise_power = std::stod(fields[6]);
            row.threshold = std::stod(fields[7]);
            row.probability = std::stod(fields[8]);
            row.error_estimate = std::stod(fields[9]);
            row.wall_time_ms = std::stod(fields[10]);
            row.seed = std::stoull(fields[11]);
            rows.push_back(row);
        }
        catch (const std::invalid_argument &)
        {
            throw config_error("csv", "line " + std::to_string(line_number) +
                                          ": malformed numeric field");
        }
        catch (const std::out_of_range &)
        {
            throw config_error("csv", "line " + std::to_string(line_number) +
                                          ": numeric field out of range");
        }
    }
    return rows;
}

// Human-readable report of the block structure chosen for a geometry.
inline void show_blockfit(std::ostream &out, const PortGeometry &geometry,
                          const EstimatorSettings &settings)
{
    const BlockFitReport report = fit_blocks_for_geometry(geometry, settings);
    out << "ports: " << geometry.num_ports
        << "  normalized size: " << geometry.normalized_size << '\n';
    out << "eigenvalues (desc):";
    for (double value : report.spectrum.values)
        out << ' ' << value;
    out << '\n';
    if (settings.explicit_blocks)
        out << "blocks: " << report.spec.num_blocks << " (explicit)\n";
    else if (settings.mass_fraction_mode)
        out << "blocks: " << report.spec.num_blocks << " (mass fraction "
            << settings.mass_fraction << ")\n";
    else
        out << "blocks: " << report.spec.num_blocks << " (eigenvalue threshold "
            << settings.eigen_threshold << ")\n";
    if (report.selection.threshold_above_max)
        out << "warning: threshold exceeds the largest eigenvalue, using one block\n";
    out << "sizes:";
    for (int size : report.spec.block_sizes)
        out << ' ' << size;
    out << "  mu: " << report.spec.intra_block_mu << '\n';
    out << "model spectrum distance: " << report.distance << '\n';
}

} // namespace fasris

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

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fasris/fasris.hpp"

namespace
{

struct Overrides
{
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> chunk_size;
    std::optional<int> workers;
    std::optional<int> elements;
    std::optional<int> ports;
    std::optional<int> chebyshev_nodes;
    std::optional<int> mvn_cap;
    std::optional<double> size;
    std::optional<double> mu;
    std::optional<double> eigen_threshold;
    std::optional<double> power;
    std::optional<double> noise;
    std::optional<double> rate;
    std::optional<double> eps1;
    std::optional<double> eps2;
    std::optional<double> distance;
    double exponent = 2.3;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    bool stable = false;
    bool scale_threshold = false;
    std::vector<std::string> estimators;
};

fasris::ExperimentConfig resolve_config(const Overrides &given)
{
    fasris::ExperimentConfig config;
    if (given.config_path)
        config = fasris::load_config(*given.config_path);

    if (given.distance)
    {
        const double gain = std::pow(*given.distance, -given.exponent);
        config.gain_bs_ris = gain;
        config.gain_ris_user = gain;
    }
    if (given.eps1)
        config.gain_bs_ris = *given.eps1;
    if (given.eps2)
        config.gain_ris_user = *given.eps2;
    if (given.elements)
        config.num_elements = *given.elements;
    if (given.ports)
        config.num_ports = *given.ports;
    if (given.size)
        config.normalized_size = *given.size;
    if (given.power)
        config.transmit_power = *given.power;
    if (given.noise)
        config.noise_power = *given.noise;
    if (given.rate)
        config.target_rate = *given.rate;
    if (given.seed)
        config.seed = *given.seed;
    if (given.trials)
        config.trials = *given.trials;
    if (given.chunk_size)
        config.chunk_size = *given.chunk_size;
    if (given.workers)
        config.num_workers = *given.workers;
    if (given.mu)
        config.mu = *given.mu;
    if (given.eigen_threshold)
        config.eigen_threshold = *given.eigen_threshold;
    if (given.chebyshev_nodes)
        config.chebyshev_nodes = *given.chebyshev_nodes;
    if (given.mvn_cap)
        config.mvn_dimension_cap = *given.mvn_cap;
    if (given.out_path)
        config.out_path = *given.out_path;
    if (given.format)
        config.format = fasris::parse_format(*given.format);
    if (given.stable)
        config.stable_output = true;
    if (given.scale_threshold)
        config.scale_threshold_to_mean = true;
    if (!given.estimators.empty())
    {
        config.estimators.clear();
        for (const std::string &name : given.estimators)
            config.estimators.push_back(fasris::parse_estimator(name));
    }
    config.validate();
    return config;
}

int write_sweep(const fasris::ExperimentConfig &config, const fasris::SweepAxis &axis)
{
    const fasris::SweepResult result = fasris::run_sweep(config, axis);

    std::ofstream file;
    if (!config.out_path.empty())
    {
        file.open(config.out_path);
        if (!file)
            throw fasris::config_error("output.path",
                                       "cannot open '" + config.out_path + "' for writing");
    }
    std::ostream &out = config.out_path.empty() ? std::cout : file;

    if (config.format == fasris::OutputFormat::csv)
        fasris::emit_csv(result.rows, out);
    else
        fasris::emit_jsonl(result.rows, out);

    for (const fasris::SkipRecord &skip : result.skipped)
        std::cerr << fasris::estimator_name(skip.estimator) << " " << skip.reason << " (M="
                  << skip.num_elements << ", N=" << skip.num_ports << ", W="
                  << skip.normalized_size << ")\n";
    return 0;
}

int write_blockfit(const fasris::ExperimentConfig &config)
{
    std::ofstream file;
    if (!config.out_path.empty())
    {
        file.open(config.out_path);
        if (!file)
            throw fasris::config_error("output.path",
                                       "cannot open '" + config.out_path + "' for writing");
    }
    std::ostream &out = config.out_path.empty() ? std::cout : file;
    fasris::show_blockfit(out, config.system().geometry, config.estimator_settings());
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Outage probability of a RIS-assisted link with a fluid-antenna receiver"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides given;
    app.add_option("--config", given.config_path, "JSON config file");
    app.add_option("--seed", given.seed, "simulation seed");
    app.add_option("--trials", given.trials, "Monte Carlo trials");
    app.add_option("--chunk-size", given.chunk_size, "trials claimed per worker grab");
    app.add_option("--workers", given.workers, "simulation worker threads");
    app.add_option("-M,--elements", given.elements, "RIS element count");
    app.add_option("-N,--ports", given.ports, "fluid-antenna port count");
    app.add_option("-W,--size", given.size, "antenna size in wavelengths");
    app.add_option("--power", given.power, "transmit power P_S, watt");
    app.add_option("--noise", given.noise, "noise power sigma_n^2, watt");
    app.add_option("--rate", given.rate, "target rate R, bit/s/Hz");
    app.add_option("--eps1", given.eps1, "BS-RIS per-element gain");
    app.add_option("--eps2", given.eps2, "RIS-user per-element gain");
    app.add_option("--distance", given.distance,
                   "hop distance; sets both gains to distance^(-exponent)");
    app.add_option("--exponent", given.exponent, "path-loss exponent for --distance")
        ->capture_default_str();
    app.add_option("--mu", given.mu, "intra-block correlation of the block model");
    app.add_option("--eigen-threshold", given.eigen_threshold,
                   "eigenvalue cutoff selecting the block count");
    app.add_option("--chebyshev-nodes", given.chebyshev_nodes, "quadrature nodes per axis");
    app.add_option("--mvn-cap", given.mvn_cap, "largest port count evaluated by CLT");
    app.add_option("--estimators", given.estimators,
                   "estimators to run (CLT, CLT-BC, CLT-IID, MC)")
        ->delimiter(',');
    app.add_option("--out", given.out_path, "output file (default stdout)");
    app.add_option("--format", given.format, "output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_flag("--stable-output", given.stable, "zero the wall-time column");
    app.add_flag("--scale-threshold", given.scale_threshold,
                 "evaluate at y = E_gamma(M) instead of the rate threshold");

    auto *point = app.add_subcommand("point", "evaluate one operating point");

    std::vector<int> port_values;
    auto *sweep_ports = app.add_subcommand("sweep-ports", "sweep the port count N");
    sweep_ports->add_option("--values", port_values, "port counts")
        ->required()
        ->delimiter(',');

    std::vector<double> size_values;
    auto *sweep_size = app.add_subcommand("sweep-size", "sweep the antenna size W");
    sweep_size->add_option("--values", size_values, "sizes in wavelengths")
        ->required()
        ->delimiter(',');

    std::vector<int> element_values;
    auto *sweep_elements = app.add_subcommand("sweep-elements", "sweep the element count M");
    sweep_elements->add_option("--values", element_values, "element counts")
        ->required()
        ->delimiter(',');

    auto *blockfit = app.add_subcommand("blockfit", "show the fitted block structure");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const fasris::ExperimentConfig config = resolve_config(given);
        if (point->parsed())
            return write_sweep(config, fasris::SweepAxis::point());
        if (sweep_ports->parsed())
            return write_sweep(config, fasris::SweepAxis::ports(port_values));
        if (sweep_size->parsed())
            return write_sweep(config, fasris::SweepAxis::size(size_values));
        if (sweep_elements->parsed())
            return write_sweep(config, fasris::SweepAxis::elements(element_values));
        if (blockfit->parsed())
            return write_blockfit(config);
        return 0;
    }
    catch (const fasris::config_error &error)
    {
        nlohmann::json report{{"error", error.what()}, {"field", error.field()}};
        std::cerr << report.dump() << '\n';
        return 1;
    }
    catch (const fasris::error &error)
    {
        nlohmann::json report{{"error", error.what()}};
        std::cerr << report.dump() << '\n';
        return 1;
    }
    catch (const std::exception &error)
    {
        nlohmann::json report{{"error", error.what()}};
        std::cerr << report.dump() << '\n';
        return 1;
    }
}

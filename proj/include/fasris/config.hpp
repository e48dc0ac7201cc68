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
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fasris/errors.hpp"
#include "fasris/outage.hpp"
#include "fasris/simulation.hpp"

namespace fasris
{

enum class OutputFormat
{
    csv,
    jsonl
};

inline Estimator parse_estimator(const std::string &name)
{
    if (name == "CLT")
        return Estimator::clt;
    if (name == "CLT-BC")
        return Estimator::clt_bc;
    if (name == "CLT-IID")
        return Estimator::clt_iid;
    if (name == "MC")
        return Estimator::monte_carlo;
    throw config_error("estimators", "unknown estimator '" + name +
                                         "' (expected CLT, CLT-BC, CLT-IID or MC)");
}

inline OutputFormat parse_format(const std::string &name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "jsonl")
        return OutputFormat::jsonl;
    throw config_error("output.format", "unknown format '" + name + "' (expected csv or jsonl)");
}

// One experiment: a base operating point plus run controls. Sweep axes are supplied
// separately; this struct holds everything that stays fixed along a sweep.
struct ExperimentConfig
{
    // operating point
    int num_elements = 40;
    int num_ports = 20;
    double normalized_size = 1.0;
    double gain_bs_ris = 2.5e-5;
    double gain_ris_user = 2.5e-5;
    double transmit_power = 0.1;
    double noise_power = 1e-8;
    double target_rate = 3.0;

    // simulation controls
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 65'536;
    int num_workers = 1;

    // analytical-estimator controls
    double mu = 0.9;
    double eigen_threshold = 0.1;
    int chebyshev_nodes = 100;
    bool mass_fraction_mode = false;
    double mass_fraction = 0.95;
    int mvn_sample_budget = 1 << 14;
    int mvn_replicates = 8;
    int mvn_dimension_cap = 50; // CLT rows above this port count are skipped in sweeps

    // when set, each point is evaluated at y = E_gamma(M) instead of Lambda_th
    bool scale_threshold_to_mean = false;

    // output controls
    std::string out_path{}; // empty = stdout
    OutputFormat format = OutputFormat::csv;
    bool stable_output = false; // zero wall-time columns for reproducible files

    std::vector<Estimator> estimators = {Estimator::clt, Estimator::clt_bc,
                                         Estimator::clt_iid, Estimator::monte_carlo};

    SystemConfig system() const
    {
        SystemConfig config;
        config.geometry = {num_ports, normalized_size};
        config.budget = {num_elements, gain_bs_ris, gain_ris_user};
        config.radio = {transmit_power, noise_power, target_rate};
        return config;
    }

    EstimatorSettings estimator_settings() const
    {
        EstimatorSettings settings;
        settings.chebyshev_nodes = chebyshev_nodes;
        settings.mu = mu;
        settings.eigen_threshold = eigen_threshold;
        settings.mass_fraction_mode = mass_fraction_mode;
        settings.mass_fraction = mass_fraction;
        settings.mvn_sample_budget = mvn_sample_budget;
        settings.mvn_replicates = mvn_replicates;
        return settings;
    }

    sim::SimPlan sim_plan() const
    {
        sim::SimPlan plan;
        plan.config = system();
        plan.num_trials = trials;
        plan.seed = seed;
        plan.chunk_size = chunk_size;
        plan.num_workers = num_workers;
        return plan;
    }

    void validate() const
    {
        if (num_elements < 1)
            throw config_error("num_elements", "must be at least 1");
        if (num_ports < 1)
            throw config_error("num_ports", "must be at least 1");
        if (!(normalized_size > 0.0))
            throw config_error("normalized_size", "must be positive");
        if (!(gain_bs_ris > 0.0))
            throw config_error("gain_bs_ris", "must be positive");
        if (!(gain_ris_user > 0.0))
            throw config_error("gain_ris_user", "must be positive");
        if (!(transmit_power > 0.0))
            throw config_error("transmit_power", "must be positive");
        if (!(noise_power > 0.0))
            throw config_error("noise_power", "must be positive");
        if (target_rate < 0.0)
            throw config_error("target_rate", "must be nonnegative");
        if (trials == 0)
            throw config_error("simulation.trials", "must be positive");
        if (chunk_size == 0)
            throw config_error("simulation.chunk_size", "must be positive");
        if (num_workers < 1)
            throw config_error("simulation.workers", "must be positive");
        if (!(mu > 0.0 && mu < 1.0))
            throw config_error("estimator.mu", "must lie strictly between 0 and 1");
        if (!(eigen_threshold > 0.0))
            throw config_error("estimator.eigen_threshold", "must be positive");
        if (chebyshev_nodes < 1)
            throw config_error("estimator.chebyshev_nodes", "must be at least 1");
        if (!(mass_fraction > 0.0 && mass_fraction <= 1.0))
            throw config_error("estimator.mass_fraction", "must lie in (0, 1]");
        if (mvn_sample_budget < 1)
            throw config_error("estimator.mvn_sample_budget", "must be positive");
        if (mvn_replicates < 2)
            throw config_error("estimator.mvn_replicates", "must be at least 2");
        if (mvn_dimension_cap < 1)
            throw config_error("estimator.mvn_dimension_cap", "must be positive");
        if (estimators.empty())
            throw config_error("estimators", "must name at least one estimator");
    }
};

namespace detail
{

inline void check_keys(const nlohmann::json &object, const std::string &prefix,
                       std::initializer_list<const char *> allowed)
{
    for (const auto &item : object.items())
    {
        bool known = false;
        for (const char *key : allowed)
            if (item.key() == key)
            {
                known = true;
                break;
            }
        if (!known)
            throw config_error(prefix.empty() ? item.key() : prefix + "." + item.key(),
                               "unknown field");
    }
}

inline void read_double(const nlohmann::json &object, const char *key,
                        const std::string &prefix, double &value)
{
    if (!object.contains(key))
        return;
    const auto &node = object.at(key);
    if (!node.is_number())
        throw config_error(prefix.empty() ? key : prefix + "." + key, "expected a number");
    value = node.get<double>();
}

inline void read_int(const nlohmann::json &object, const char *key,
                     const std::string &prefix, int &value)
{
    if (!object.contains(key))
        return;
    const auto &node = object.at(key);
    if (!node.is_number_integer())
        throw config_error(prefix.empty() ? key : prefix + "." + key, "expected an integer");
    value = node.get<int>();
}

inline void read_uint64(const nlohmann::json &object, const char *key,
                        const std::string &prefix, std::uint64_t &value)
{
    if (!object.contains(key))
        return;
    const auto &node = object.at(key);
    if (!node.is_number_unsigned() && !node.is_number_integer())
        throw config_error(prefix.empty() ? key : prefix + "." + key,
                           "expected a nonnegative integer");
    if (node.is_number_integer() && node.get<std::int64_t>() < 0)
        throw config_error(prefix.empty() ? key : prefix + "." + key,
                           "expected a nonnegative integer");
    value = node.get<std::uint64_t>();
}

inline void read_bool(const nlohmann::json &object, const char *key,
                      const std::string &prefix, bool &value)
{
    if (!object.contains(key))
        return;
    const auto &node = object.at(key);
    if (!node.is_boolean())
        throw config_error(prefix.empty() ? key : prefix + "." + key, "expected a boolean");
    value = node.get<bool>();
}

// A gain is either a plain number or {"distance": d, "exponent": a} meaning d^(-a).
inline void read_gain(const nlohmann::json &object, const char *key,
                      const std::string &prefix, double &value)
{
    if (!object.contains(key))
        return;
    const auto &node = object.at(key);
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    if (node.is_number())
    {
        value = node.get<double>();
        return;
    }
    if (!node.is_object())
        throw config_error(field, "expected a number or {distance, exponent}");
    check_keys(node, field, {"distance", "exponent"});
    if (!node.contains("distance") || !node.contains("exponent"))
        throw config_error(field, "needs both distance and exponent");
    const double distance = node.at("distance").get<double>();
    const double exponent = node.at("exponent").get<double>();
    if (!(distance > 0.0))
        throw config_error(field + ".distance", "must be positive");
    value = std::pow(distance, -exponent);
}

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json &root)
{
    if (!root.is_object())
        throw config_error("config", "top level must be an object");
    detail::check_keys(root, "",
                       {"defaults", "simulation", "estimator", "output", "estimators",
                        "scale_threshold_to_mean"});

    ExperimentConfig config;

    if (root.contains("defaults"))
    {
        const auto &block = root.at("defaults");
        if (!block.is_object())
            throw config_error("defaults", "must be an object");
        detail::check_keys(block, "defaults",
                           {"num_elements", "num_ports", "normalized_size", "gain_bs_ris",
                            "gain_ris_user", "transmit_power", "noise_power", "target_rate"});
        detail::read_int(block, "num_elements", "defaults", config.num_elements);
        detail::read_int(block, "num_ports", "defaults", config.num_ports);
        detail::read_double(block, "normalized_size", "defaults", config.normalized_size);
        detail::read_gain(block, "gain_bs_ris", "defaults", config.gain_bs_ris);
        detail::read_gain(block, "gain_ris_user", "defaults", config.gain_ris_user);
        detail::read_double(block, "transmit_power", "defaults", config.transmit_power);
        detail::read_double(block, "noise_power", "defaults", config.noise_power);
        detail::read_double(block, "target_rate", "defaults", config.target_rate);
    }

    if (root.contains("simulation"))
    {
        const auto &block = root.at("simulation");
        if (!block.is_object())
            throw config_error("simulation", "must be an object");
        detail::check_keys(block, "simulation", {"trials", "seed", "chunk_size", "workers"});
        detail::read_uint64(block, "trials", "simulation", config.trials);
        detail::read_uint64(block, "seed", "simulation", config.seed);
        detail::read_uint64(block, "chunk_size", "simulation", config.chunk_size);
        detail::read_int(block, "workers", "simulation", config.num_workers);
    }

    if (root.contains("estimator"))
    {
        const auto &block = root.at("estimator");
        if (!block.is_object())
            throw config_error("estimator", "must be an object");
        detail::check_keys(block, "estimator",
                           {"mu", "eigen_threshold", "chebyshev_nodes", "mass_fraction_mode",
                            "mass_fraction", "mvn_sample_budget", "mvn_replicates",
                            "mvn_dimension_cap"});
        detail::read_double(block, "mu", "estimator", config.mu);
        detail::read_double(block, "eigen_threshold", "estimator", config.eigen_threshold);
        detail::read_int(block, "chebyshev_nodes", "estimator", config.chebyshev_nodes);
        detail::read_bool(block, "mass_fraction_mode", "estimator", config.mass_fraction_mode);
        detail::read_double(block, "mass_fraction", "estimator", config.mass_fraction);
        detail::read_int(block, "mvn_sample_budget", "estimator", config.mvn_sample_budget);
        detail::read_int(block, "mvn_replicates", "estimator", config.mvn_replicates);
        detail::read_int(block, "mvn_dimension_cap", "estimator", config.mvn_dimension_cap);
    }

    if (root.contains("output"))
    {
        const auto &block = root.at("output");
        if (!block.is_object())
            throw config_error("output", "must be an object");
        detail::check_keys(block, "output", {"path", "format", "stable"});
        if (block.contains("path"))
        {
            if (!block.at("path").is_string())
                throw config_error("output.path", "expected a string");
            config.out_path = block.at("path").get<std::string>();
        }
        if (block.contains("format"))
        {
            if (!block.at("format").is_string())
                throw config_error("output.format", "expected a string");
            config.format = parse_format(block.at("format").get<std::string>());
        }
        detail::read_bool(block, "stable", "output", config.stable_output);
    }

    if (root.contains("estimators"))
    {
        const auto &block = root.at("estimators");
        if (!block.is_array())
            throw config_error("estimators", "expected an array of names");
        config.estimators.clear();
        for (const auto &node : block)
        {
            if (!node.is_string())
                throw config_error("estimators", "expected an array of names");
            config.estimators.push_back(parse_estimator(node.get<std::string>()));
        }
    }

    detail::read_bool(root, "scale_threshold_to_mean", "", config.scale_threshold_to_mean);

    config.validate();
    return config;
}

inline ExperimentConfig load_config(const std::string &path)
{
    std::ifstream stream(path);
    if (!stream)
        throw config_error("config", "cannot open '" + path + "'");
    nlohmann::json root;
    try
    {
        root = nlohmann::json::parse(stream);
    }
    catch (const nlohmann::json::parse_error &error)
    {
        throw config_error("config", std::string("invalid JSON: ") + error.what());
    }
    return config_from_json(root);
}

} // namespace fasris

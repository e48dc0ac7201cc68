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
#include <limits>
#include <vector>

#include "fasris/errors.hpp"

namespace fasris
{

// Standard normal CDF, accurate in both tails.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

// Standard normal PDF.
inline double normal_pdf(double z) { return 0.3989422804014326779 * std::exp(-0.5 * z * z); }

/*!
 * Inverse of the standard normal CDF (Wichura's PPND16 rational approximations).
 * Relative accuracy about 1e-15 over (0, 1); returns +-infinity at the endpoints.
 */
inline double normal_quantile(double p)
{
    if (p <= 0.0)
        return -std::numeric_limits<double>::infinity();
    if (p >= 1.0)
        return std::numeric_limits<double>::infinity();

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425)
    {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                                 6.7265770927008700853e+4) *
                                    r +
                                4.5921953931549871457e+4) *
                                   r +
                               1.3731693765509461125e+4) *
                                  r +
                              1.9715909503065514427e+3) *
                                 r +
                             1.3314166789178437745e+2) *
                                r +
                            3.3871328727963666080e+0);
        const double den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                                 3.9307895800092710610e+4) *
                                    r +
                                2.1213794301586595867e+4) *
                                   r +
                               5.3941960214247511077e+3) *
                                  r +
                              6.8718700749205790830e+2) *
                                 r +
                             4.2313330701600911252e+1) *
                                r +
                            1.0);
        return q * num / den;
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0)
    {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) *
                                    r +
                                1.27045825245236838258e+0) *
                                   r +
                               3.64784832476320460504e+0) *
                                  r +
                              5.76949722146069140550e+0) *
                                 r +
                             4.63033784615654529590e+0) *
                                r +
                            1.42343711074968357734e+0);
        const double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) *
                                    r +
                                1.48103976427480074590e-1) *
                                   r +
                               6.89767334985100004550e-1) *
                                  r +
                              1.67638483018380384940e+0) *
                                 r +
                             2.05319162663775882187e+0) *
                                r +
                            1.0);
        value = num / den;
    }
    else
    {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) *
                                    r +
                                2.65321895265761230930e-2) *
                                   r +
                               2.96560571828504891230e-1) *
                                  r +
                              1.78482653991729133580e+0) *
                                 r +
                             5.46378491116411436990e+0) *
                                r +
                            6.65790464350110377720e+0);
        const double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) *
                                    r +
                                7.86869131145613259100e-4) *
                                   r +
                               1.48753612908506148525e-2) *
                                  r +
                              1.36929880922735805310e-1) *
                                 r +
                             5.99832206555887937690e-1) *
                                r +
                            1.0);
        value = num / den;
    }
    return (q < 0.0) ? -value : value;
}

/*!
 * First-kind Gauss-Chebyshev rule with U nodes p_t = cos((2t-1)pi/(2U)), t = 1..U.
 *
 * Integrates f against the Chebyshev weight on (-1,1):
 *   int_{-1}^{1} f(x)/sqrt(1-x^2) dx ~ (pi/U) sum_t f(p_t)
 * exactly for polynomials of degree <= 2U-1. `circle_factors` caches sqrt(1-p_t^2),
 * which converts the rule into a plain integral approximation (see integrate_truncated).
 */
struct ChebyshevRule
{
    int num_nodes = 0;
    std::vector<double> nodes;
    std::vector<double> circle_factors;
    double weight_scale = 0.0; // pi/U

    static ChebyshevRule make(int num_nodes)
    {
        if (num_nodes < 1)
            throw numeric_error("ChebyshevRule: need at least one node");
        ChebyshevRule rule;
        rule.num_nodes = num_nodes;
        rule.weight_scale = M_PI / num_nodes;
        rule.nodes.resize(num_nodes);
        rule.circle_factors.resize(num_nodes);
        for (int t = 1; t <= num_nodes; ++t)
        {
            const double angle = (2.0 * t - 1.0) * M_PI / (2.0 * num_nodes);
            rule.nodes[t - 1] = std::cos(angle);
            rule.circle_factors[t - 1] = std::sin(angle);
        }
        return rule;
    }
};

// Truncated integration range [center - half_width, center + half_width].
struct TruncationWindow
{
    double center = 0.0;
    double half_width = 0.0;
};

// Window placement for the estimator quadratures: adaptive picks mean +- sigmas*stddev,
// fixed reproduces a literal symmetric [-H, H] around zero.
struct TruncationPolicy
{
    bool fixed = false;
    double sigmas = 10.0;    // adaptive half width in standard deviations
    double half_width = 0.0; // H when fixed

    TruncationWindow window(double mean, double stddev) const
    {
        if (fixed)
            return {0.0, half_width};
        return {mean, sigmas * stddev};
    }
};

/*!
 * Approximates int f(x) dx over the window via the substitution x = center + H*p:
 *   H * (pi/U) * sum_t sqrt(1 - p_t^2) * f(center + H*p_t)
 */
template <typename F>
double integrate_truncated(F &&f, const TruncationWindow &window, const ChebyshevRule &rule)
{
    if (window.half_width <= 0.0)
        throw numeric_error("integrate_truncated: window half_width must be positive");
    double sum = 0.0;
    for (int t = 0; t < rule.num_nodes; ++t)
        sum += rule.circle_factors[t] * f(window.center + window.half_width * rule.nodes[t]);
    return window.half_width * rule.weight_scale * sum;
}

} // namespace fasris

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

#include <array>
#include <cmath>
#include <cstdint>

namespace fasris
{

// splitmix64 step; used for seeding and for deriving independent substreams.
inline std::uint64_t splitmix64_next(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * xoshiro256++ generator with splitmix64 seeding.
 *
 * `for_substream(seed, stream)` derives a statistically independent generator for each
 * (seed, stream) pair. Monte Carlo code assigns one substream per trial, which makes every
 * result a pure function of (seed, trial index), independent of scheduling, chunking, or
 * the number of workers.
 */
class Xoshiro256pp
{
  public:
    static Xoshiro256pp seeded(std::uint64_t seed)
    {
        Xoshiro256pp g;
        std::uint64_t sm = seed;
        for (auto &word : g.state_)
            word = splitmix64_next(sm);
        return g;
    }

    static Xoshiro256pp for_substream(std::uint64_t seed, std::uint64_t stream)
    {
        std::uint64_t sm = seed;
        std::uint64_t base = splitmix64_next(sm);
        std::uint64_t mix = base ^ (stream + 0x9e3779b97f4a7c15ULL);
        return seeded(mix ^ (seed << 1));
    }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    // Standard normal via the Marsaglia polar method; pairs are cached.
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do
        {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace fasris

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

#include <stdexcept>
#include <string>

namespace fasris
{

// Base class for all library errors.
class error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Numerical failure: indefinite matrix, non-convergent solver, invalid quadrature setup.
class numeric_error : public error
{
  public:
    using error::error;
};

// Invalid user-supplied configuration; `field` names the offending entry.
class config_error : public error
{
  public:
    config_error(const std::string &field, const std::string &message)
        : error("config field '" + field + "': " + message), field_(field)
    {
    }

    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

} // namespace fasris

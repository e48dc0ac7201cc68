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

#include "fasris/config.hpp"
#include "fasris/correlation.hpp"
#include "fasris/errors.hpp"
#include "fasris/moments.hpp"
#include "fasris/mvn.hpp"
#include "fasris/outage.hpp"
#include "fasris/quadrature.hpp"
#include "fasris/rng.hpp"
#include "fasris/simulation.hpp"
#include "fasris/sweep.hpp"

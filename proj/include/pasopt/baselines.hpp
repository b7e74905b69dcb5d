// SPDX-License-Identifier: Apache-2.0
//
// pasopt - placement optimization for multi-waveguide pinching antenna systems
// Copyright (C) 2026 The pasopt authors
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

#include "pasopt/model.hpp"
#include "pasopt/random.hpp"

#include <span>
#include <string>
#include <vector>

namespace pasopt {

enum class BaselineKind { cup, upcs, rpcs };

const char* to_string(BaselineKind kind);

struct BaselineResult {
    Placement placement;
    bool projection_applied = false;    // UPCS: grid selection violated d_min and was projected
    bool preplacement_capped = false;   // RPCS: M = K did not fit on the waveguide
};

/// Closest-to-user placement: user x-coordinates pushed through the pairwise projection.
Placement place_cup(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment);

/// Uniform pre-placement on {0, grid, 2 grid, ...}; each user claims the nearest
/// free grid point in ascending-x order, ties to the lower coordinate.
/// Throws std::invalid_argument when a waveguide has fewer grid points than users.
BaselineResult place_upcs(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                          double grid_spacing = 0.1);

/// Random feasible pre-placement of rpcs_antenna_count() antennas per waveguide,
/// then nearest free antenna per user.
BaselineResult place_rpcs(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                          Rng& rng);

/// min(K, floor(x_max / d_min) + 1): one candidate per user, capped to what fits.
std::size_t rpcs_antenna_count(const SystemConfig& config, std::size_t num_users);

/// Greedy distinct nearest selection. candidates must be ascending; users are
/// served in the order given. Returns the chosen candidate per user.
std::vector<double> claim_nearest(std::span<const double> candidates, std::span<const double> user_x);

}  // namespace pasopt

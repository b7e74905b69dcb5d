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

#include "pasopt/baselines.hpp"

#include "pasopt/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pasopt {

const char* to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::cup: return "CUP";
        case BaselineKind::upcs: return "UPCS";
        case BaselineKind::rpcs: return "RPCS";
    }
    return "?";
}

Placement place_cup(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment) {
    Placement raw = Placement::shaped_like(assignment);
    for (std::size_t n = 0; n < assignment.groups.size(); ++n)
        for (std::size_t j = 0; j < assignment.groups[n].size(); ++j)
            raw.coords[n][j] = scenario.users[static_cast<std::size_t>(assignment.groups[n][j])].x;
    return project_alg1(raw, config);
}

std::vector<double> claim_nearest(std::span<const double> candidates, std::span<const double> user_x) {
    if (user_x.size() > candidates.size())
        throw std::invalid_argument("claim_nearest: more users than candidate positions");
    constexpr double tie_tol = 1e-12;
    std::vector<bool> taken(candidates.size(), false);
    std::vector<double> chosen;
    chosen.reserve(user_x.size());
    for (double x : user_x) {
        const auto split = static_cast<std::ptrdiff_t>(
            std::lower_bound(candidates.begin(), candidates.end(), x) - candidates.begin());
        std::ptrdiff_t left = split - 1;
        while (left >= 0 && taken[static_cast<std::size_t>(left)]) --left;
        std::ptrdiff_t right = split;
        const auto count = static_cast<std::ptrdiff_t>(candidates.size());
        while (right < count && taken[static_cast<std::size_t>(right)]) ++right;

        std::ptrdiff_t pick;
        if (left < 0) {
            pick = right;
        } else if (right >= count) {
            pick = left;
        } else {
            const double dl = x - candidates[static_cast<std::size_t>(left)];
            const double dr = candidates[static_cast<std::size_t>(right)] - x;
            pick = dl <= dr + tie_tol ? left : right;
        }
        taken[static_cast<std::size_t>(pick)] = true;
        chosen.push_back(candidates[static_cast<std::size_t>(pick)]);
    }
    return chosen;
}

namespace {

// Claims candidates for each waveguide's users in ascending user-x order.
Placement select_per_waveguide(const Scenario& scenario, const Assignment& assignment,
                               const std::vector<std::vector<double>>& candidates) {
    Placement out = Placement::shaped_like(assignment);
    for (std::size_t n = 0; n < assignment.groups.size(); ++n) {
        const auto& group = assignment.groups[n];
        std::vector<std::size_t> order(group.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scenario.users[static_cast<std::size_t>(group[a])].x <
                   scenario.users[static_cast<std::size_t>(group[b])].x;
        });
        std::vector<double> xs;
        xs.reserve(order.size());
        for (auto j : order) xs.push_back(scenario.users[static_cast<std::size_t>(group[j])].x);
        const auto chosen = claim_nearest(candidates[n], xs);
        for (std::size_t r = 0; r < order.size(); ++r) out.coords[n][order[r]] = chosen[r];
    }
    return out;
}

}  // namespace

BaselineResult place_upcs(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                          double grid_spacing) {
    if (!(grid_spacing > 0.0)) throw std::invalid_argument("place_upcs: grid spacing must be positive");
    const auto points = static_cast<std::size_t>(std::floor(config.waveguide_length / grid_spacing + 1e-9)) + 1;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i) * grid_spacing;
    if (assignment.largest_group() > points)
        throw std::invalid_argument("place_upcs: a waveguide serves more users than there are grid points");

    const std::vector<std::vector<double>> candidates(assignment.num_waveguides(), grid);
    BaselineResult result;
    result.placement = select_per_waveguide(scenario, assignment, candidates);
    if (!is_feasible(result.placement, config)) {
        result.placement = project_alg1(result.placement, config);
        result.projection_applied = true;
    }
    return result;
}

std::size_t rpcs_antenna_count(const SystemConfig& config, std::size_t num_users) {
    const auto fit = static_cast<std::size_t>(std::floor(config.waveguide_length / config.min_spacing + 1e-9)) + 1;
    return std::min(num_users, fit);
}

BaselineResult place_rpcs(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                          Rng& rng) {
    const std::size_t K = assignment.num_users();
    const std::size_t M = rpcs_antenna_count(config, K);
    BaselineResult result;
    result.preplacement_capped = M < K;
    std::vector<std::vector<double>> candidates;
    candidates.reserve(assignment.num_waveguides());
    for (std::size_t n = 0; n < assignment.num_waveguides(); ++n)
        candidates.push_back(sample_feasible_uniform(rng, GroupSpec{config.waveguide_length, config.min_spacing, M}));
    result.placement = select_per_waveguide(scenario, assignment, candidates);
    return result;
}

}  // namespace pasopt

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

/// Absolute tolerance applied to the bound and spacing tests in is_feasible.
inline constexpr double feasibility_slack = 1e-12;

/// Per-waveguide feasible set: size antennas in [0, x_max] pairwise >= min_spacing apart.
struct GroupSpec {
    double x_max = 0.0;
    double min_spacing = 0.0;
    std::size_t size = 0;

    bool feasible() const;
    // Length left after reserving (size-1) * min_spacing; clamped at zero.
    double free_length() const;
};

/// Stable ascending order of one waveguide's coordinates.
/// forward[r] is the original index of the r-th smallest value; inverse undoes it.
struct SortPermutation {
    std::vector<std::size_t> forward;
    std::vector<std::size_t> inverse;

    static SortPermutation of(std::span<const double> values);
};

enum class Violation { none, below_lower_bound, above_upper_bound, spacing };

struct FeasibilityReport {
    bool feasible = true;
    Violation violation = Violation::none;
    int waveguide = -1;
    std::size_t index = 0;  // original index of the offending antenna within its waveguide

    explicit operator bool() const { return feasible; }
    std::string describe() const;
};

FeasibilityReport is_group_feasible(std::span<const double> coords, double x_max, double min_spacing);
FeasibilityReport is_feasible(const Placement& placement, const SystemConfig& config);

/// The ordering / spacing / span conditions on a waveguide's sorted coordinates:
/// bounds  0 <= x_(1) <= ... <= x_(M) <= x_max,
/// spacing x_(m) + d <= x_(m+1),
/// span    x_(M+1-m) - x_(m) >= (M+1-2m) d  for the outer-to-inner pairs.
struct ChainConditions {
    bool bounds = true;
    bool spacing = true;
    bool span = true;

    bool all() const { return bounds && spacing && span; }
};
ChainConditions check_chain_conditions(std::span<const double> coords, double x_max, double min_spacing,
                                       double slack = feasibility_slack);

/// Pairwise outer-to-inner projection. Works on the stable-sorted group,
/// clamps each pair into the running window [x_low, x_up] and widens it to
/// (j-m) d_min by moving the lower antenna down, spilling onto the upper one
/// when the lower window edge binds. Feasible inputs are returned unchanged.
/// Throws std::invalid_argument when no feasible placement of this size exists.
std::vector<double> project_group_alg1(std::span<const double> coords, double x_max, double min_spacing);

/// Euclidean projection onto the per-waveguide feasible set. Solved as a
/// box-bounded isotonic regression on z_i = x_(i) - i d_min via pool-adjacent-violators.
std::vector<double> project_group_exact(std::span<const double> coords, double x_max, double min_spacing);

enum class ProjectionKind { alg1, exact };

Placement project_alg1(const Placement& placement, const SystemConfig& config);
Placement project_exact(const Placement& placement, const SystemConfig& config);
Placement project(ProjectionKind kind, const Placement& placement, const SystemConfig& config);

ProjectionKind parse_projection_kind(const std::string& name);
const char* to_string(ProjectionKind kind);

/// Uniform draw over the ordered feasible set of one waveguide (ascending output).
std::vector<double> sample_feasible_uniform(Rng& rng, const GroupSpec& spec);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace pasopt

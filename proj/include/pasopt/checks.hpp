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

// Invariant suites shared by `selftest` and the acceptance binary.

#pragma once

#include "pasopt/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pasopt::checks {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double metric = 0.0;  // suite-specific headline number
    std::string detail;   // first failure, or a summary line
    double elapsed_ms = 0.0;
};

// Random alg1 inputs: out-of-range, duplicate, reversed, near-boundary,
// clustered, tight-x_max and already-feasible groups of size 1..12.
// Checks feasibility, bitwise idempotence, the fixed point on feasible input,
// order preservation and the chain conditions.
CheckResult projection_fuzz(std::uint64_t seed, std::size_t cases);

// ||exact(x) - x|| <= ||alg1(x) - x|| on random inputs. metric = worst ratio
// alg1/exact distance (>= 1).
CheckResult projection_dominance(std::uint64_t seed, std::size_t cases);

// The [0.5, 0.5], d_min = 0.2 counterexample to alg1 optimality.
CheckResult projection_counterexample();

// Minimum-distance projection on a grid by dynamic programming, minimised over
// all assignments of inputs to sorted slots. Grid points k * resolution on
// [0, x_max]; min_spacing and x_max must be multiples of resolution.
std::vector<double> grid_projection(std::span<const double> coords, double x_max, double min_spacing,
                                    double resolution);

// project_exact against grid_projection on groups of size <= 4.
CheckResult projection_vs_grid(std::uint64_t seed, std::size_t cases, double resolution = 1e-3);

// FP auxiliary updates at fixed x: tightness, zeta-update on F, gamma-update on
// f, and the combined step from an arbitrary (gamma, zeta). metric = worst
// relative tightness error. The detail line also counts how often a gamma
// update with zeta held fixed lowered F; that is reported, not gated.
CheckResult fp_updates(std::uint64_t seed, std::size_t cases);

// CUP / UPCS / RPCS placements feasible on random scenarios.
CheckResult baseline_feasibility(std::uint64_t seed, std::size_t cases);

// Gradient oracle on 20 small instances; passes iff max error < 1e-5.
CheckResult gradient(std::uint64_t seed);

// Every suite above. quick = true shrinks the case counts for interactive use.
std::vector<CheckResult> run_all(std::uint64_t seed, bool quick);

std::string format(const CheckResult& result);

}  // namespace pasopt::checks

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

#include "pasopt/fp_solver.hpp"
#include "pasopt/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pasopt::verify {

/// Signal and interference powers re-summed antenna by antenna from raw
/// positions, without going through the effective-channel table.
struct DirectPowers {
    std::vector<double> signal;
    std::vector<double> interference_plus_noise;
};
DirectPowers direct_powers(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                           const Placement& placement);

/// The FP objective F evaluated from DirectPowers.
double direct_objective_F(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                          const Placement& placement, std::span<const double> gamma, std::span<const double> zeta);

/// Mean rate in bits/s/Hz evaluated from DirectPowers.
double direct_mean_rate(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                        const Placement& placement);

/// The placement-dependent part of F, sum_k 2 z_k sqrt((1+g_k) A_k) - z_k^2 (A_k + B_k).
/// Differs from direct_objective_F by the constant sum_k ln(1+g_k) - g_k, which
/// only adds cancellation error to a difference quotient.
double direct_placement_terms(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                              const Placement& placement, std::span<const double> gamma,
                              std::span<const double> zeta);

/// central2/4/6: fixed central stencils of order 2/4/6 at the given step.
/// ridders: Ridders' extrapolation of central differences, starting at the given
/// step and shrinking it by 1.4 per level (robust near nulls of A_k, where
/// sqrt(A_k) bends sharply on the scale of the starting step).
enum class Stencil { central2, central4, central6, ridders };

/// Central finite-difference gradient of F (via direct_placement_terms), flatten() order.
std::vector<double> fd_gradient_F(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                                  const Placement& placement, std::span<const double> gamma,
                                  std::span<const double> zeta, double step, Stencil stencil = Stencil::ridders);

/// Per-coordinate relative error |a-b| / max(|a|, |b|, floor). floor is
/// relative_floor times the largest |b|, so coordinates that are numerically
/// zero compared with the rest of the vector do not dominate.
double max_relative_error(std::span<const double> analytic, std::span<const double> reference,
                          double relative_floor = 1e-8);

struct GradcheckInstance {
    int num_waveguides = 0;
    int num_users = 0;
    double max_rel_error = 0.0;        // against the gated stencil
    double max_rel_error_2pt = 0.0;    // informational: plain 2-point central difference
};

struct GradcheckResult {
    std::vector<GradcheckInstance> instances;
    double max_rel_error = 0.0;
    double max_rel_error_2pt = 0.0;
    double elapsed_ms = 0.0;
};

/// Random small instances (N in {2,3}, K in {2..6}, gamma in [0,5], zeta in [0,1],
/// random feasible placements) on the default physical setting. The FD step is
/// 1e-6 x_max. The gate uses Ridders' extrapolation from that step; the plain
/// 2-point error is reported alongside (its truncation error alone is ~3e-5 at 28 GHz).
GradcheckResult run_gradcheck(std::uint64_t seed, int instances = 20, const SystemConfig& base = {});

}  // namespace pasopt::verify

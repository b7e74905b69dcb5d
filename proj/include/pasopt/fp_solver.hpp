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
#include "pasopt/projection.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pasopt {

/// Auxiliary variables of the fractional-programming reformulation:
/// gamma from the Lagrangian dual transform, zeta from the quadratic transform.
struct FpState {
    std::vector<double> gamma;
    std::vector<double> zeta;
};

/// How the ascent direction is formed from dF/dx before the step mu is applied.
/// raw: x + mu * grad. max_norm: x + mu * grad / max_i |grad_i|, so mu is the
/// largest single-antenna move in meters.
enum class GradientScaling { raw, max_norm };

GradientScaling parse_gradient_scaling(const std::string& name);
const char* to_string(GradientScaling scaling);

struct PgaSettings {
    double step_base = 0.01;
    double step_exponent = 0.6;
    int tau_max = 100;       // inner iteration cap
    int t_max = 10;          // outer iteration cap
    double outer_tol = 1e-4; // relative change of the FP objective
    double inner_tol = 1e-7; // max-norm iterate change, in units of x_max
    ProjectionKind projection = ProjectionKind::alg1;
    GradientScaling scaling = GradientScaling::max_norm;

    void validate() const;
};

enum class InitMode { cup, random };

InitMode parse_init_mode(const std::string& name);
const char* to_string(InitMode mode);

struct SolveReport {
    Placement placement;
    std::vector<double> sinr;
    std::vector<double> rates;
    double mean_rate = 0.0;
    double initial_mean_rate = 0.0;
    std::vector<double> rate_trace;       // mean rate after each outer iteration [bits/s/Hz]
    std::vector<double> objective_trace;  // F after each outer iteration, auxiliaries refreshed [nats]
    std::vector<int> inner_iterations;    // per outer iteration
    int outer_iterations = 0;
    bool converged = false;
    std::size_t cap_violations = 0;       // SINR-cap breaches summed over every evaluated iterate
    double wall_ms = 0.0;
};

/// f(x, gamma) = sum_k ln(1+g_k) - g_k + (1+g_k) A_k / (A_k + B_k).
double objective_f(const ChannelMatrix& channels, std::span<const double> gamma);

/// F(x, gamma, zeta) = sum_k ln(1+g_k) - g_k + 2 z_k sqrt((1+g_k) A_k) - z_k^2 (A_k + B_k).
double objective_F(const ChannelMatrix& channels, std::span<const double> gamma, std::span<const double> zeta);

std::vector<double> update_gamma(const ChannelMatrix& channels);
std::vector<double> update_zeta(const ChannelMatrix& channels, std::span<const double> gamma);

/// Floor applied to A_k inside the A_k^{-1/2} weight of the gradient [W].
inline constexpr double signal_power_floor = 1e-30;
// Gradient components smaller than this fraction of the summed term magnitudes
// are returned as exact zeros.
inline constexpr double gradient_cancellation_floor = 1e-12;

/// dF/dx for every active antenna, in Placement::flatten() order.
std::vector<double> gradient_F(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                               const Placement& placement, std::span<const double> gamma,
                               std::span<const double> zeta);

/// step_base / (tau + tau_max (t-1))^step_exponent, with tau, t >= 1.
double step_size(int tau, int t, const PgaSettings& settings);

struct InnerLoopResult {
    Placement placement;
    int iterations = 0;
};

/// Projected gradient ascent on F with gamma and zeta held fixed.
InnerLoopResult pga_inner_loop(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                               const Placement& start, std::span<const double> gamma, std::span<const double> zeta,
                               const PgaSettings& settings, int t);

/// Alternates closed-form gamma/zeta updates with the inner PGA loop.
/// init_seed only matters for InitMode::random.
SolveReport solve(const SystemConfig& config, const Scenario& scenario, const PgaSettings& settings,
                  InitMode init_mode = InitMode::cup, std::uint64_t init_seed = 0);

}  // namespace pasopt

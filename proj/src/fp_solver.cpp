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

#include "pasopt/fp_solver.hpp"

#include "pasopt/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pasopt {

void PgaSettings::validate() const {
    if (!(step_base > 0.0)) throw std::invalid_argument("PgaSettings: step_base must be positive");
    if (!(step_exponent > 0.0 && step_exponent <= 1.0))
        throw std::invalid_argument("PgaSettings: step_exponent must lie in (0, 1]");
    if (tau_max < 1 || t_max < 1) throw std::invalid_argument("PgaSettings: iteration caps must be >= 1");
    if (!(outer_tol >= 0.0) || !(inner_tol >= 0.0))
        throw std::invalid_argument("PgaSettings: tolerances must be non-negative");
}

GradientScaling parse_gradient_scaling(const std::string& name) {
    if (name == "raw") return GradientScaling::raw;
    if (name == "max_norm") return GradientScaling::max_norm;
    throw std::invalid_argument("unknown gradient scaling '" + name + "' (expected raw or max_norm)");
}

const char* to_string(GradientScaling scaling) { return scaling == GradientScaling::raw ? "raw" : "max_norm"; }

InitMode parse_init_mode(const std::string& name) {
    if (name == "cup") return InitMode::cup;
    if (name == "random") return InitMode::random;
    throw std::invalid_argument("unknown init mode '" + name + "' (expected cup or random)");
}

const char* to_string(InitMode mode) { return mode == InitMode::random ? "random" : "cup"; }

double objective_f(const ChannelMatrix& channels, std::span<const double> gamma) {
    double f = 0.0;
    for (std::size_t k = 0; k < channels.num_users; ++k) {
        const double A = channels.signal_power[k];
        const double B = channels.interference_plus_noise[k];
        f += std::log1p(gamma[k]) - gamma[k] + (1.0 + gamma[k]) * A / (A + B);
    }
    return f;
}

double objective_F(const ChannelMatrix& channels, std::span<const double> gamma, std::span<const double> zeta) {
    double F = 0.0;
    for (std::size_t k = 0; k < channels.num_users; ++k) {
        const double A = channels.signal_power[k];
        const double B = channels.interference_plus_noise[k];
        F += std::log1p(gamma[k]) - gamma[k] + 2.0 * zeta[k] * std::sqrt((1.0 + gamma[k]) * A) -
             zeta[k] * zeta[k] * (A + B);
    }
    return F;
}

std::vector<double> update_gamma(const ChannelMatrix& channels) {
    std::vector<double> gamma(channels.num_users);
    for (std::size_t k = 0; k < gamma.size(); ++k)
        gamma[k] = channels.signal_power[k] / channels.interference_plus_noise[k];
    return gamma;
}

std::vector<double> update_zeta(const ChannelMatrix& channels, std::span<const double> gamma) {
    std::vector<double> zeta(channels.num_users);
    for (std::size_t k = 0; k < zeta.size(); ++k) {
        const double A = channels.signal_power[k];
        const double B = channels.interference_plus_noise[k];
        zeta[k] = std::sqrt((1.0 + gamma[k]) * A) / (A + B);
    }
    return zeta;
}

std::vector<double> gradient_F(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                               const Placement& placement, std::span<const double> gamma,
                               std::span<const double> zeta) {
    check_shape(assignment, placement);
    const std::size_t K = scenario.size();
    const std::size_t N = assignment.num_waveguides();
    if (gamma.size() != K || zeta.size() != K) throw std::invalid_argument("gradient_F: auxiliary size mismatch");

    const double lambda = config.wavelength();
    const double k0 = 2.0 * std::numbers::pi / lambda;   // free-space wavenumber
    const double kg = k0 * config.n_eff;                  // guided wavenumber
    const double amp = lambda / (4.0 * std::numbers::pi);
    const double d2 = config.height * config.height;
    const double P = config.tx_power_per_user;

    // Per antenna and user: the product h g and its derivative w.r.t. the antenna x.
    const std::size_t total = placement.size();
    std::vector<cdouble> hg(total * K);
    std::vector<cdouble> dhg(total * K);
    std::vector<cdouble> field(N * K, cdouble{});  // per-waveguide superposed response
    std::size_t a = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const double yn = waveguide_y(config, static_cast<int>(n));
        for (double x : placement.coords[n]) {
            for (std::size_t k = 0; k < K; ++k) {
                const double dx = x - scenario.users[k].x;
                const double dy = scenario.users[k].y - yn;
                const double r = std::sqrt(dx * dx + dy * dy + d2);
                const cdouble v = std::polar(amp / r, -(k0 * r + kg * x));
                const double dr = dx / r;
                const cdouble factor{-dr / r, -(k0 * dr + kg)};
                hg[a * K + k] = v;
                dhg[a * K + k] = v * factor;
                field[n * K + k] += v;
            }
            ++a;
        }
    }

    // Weight of dA_{i,k} for antennas on waveguide n:
    //   [n_k == n] zeta_k sqrt(1+gamma_k) / sqrt(A_k) - zeta_k^2 |K_n|
    std::vector<double> own_weight(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double A = std::max(P * std::norm(field[static_cast<std::size_t>(assignment.serving[k]) * K + k]),
                                  signal_power_floor);
        own_weight[k] = zeta[k] * std::sqrt(1.0 + gamma[k]) / std::sqrt(A);
    }

    std::vector<double> grad(total, 0.0);
    a = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const double group = static_cast<double>(assignment.groups[n].size());
        for (std::size_t m = 0; m < placement.coords[n].size(); ++m, ++a) {
            double g = 0.0;
            double magnitude = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double dA = 2.0 * P * (std::conj(field[n * K + k]) * dhg[a * K + k]).real();
                double w = -zeta[k] * zeta[k] * group;
                if (static_cast<std::size_t>(assignment.serving[k]) == n) w += own_weight[k];
                g += w * dA;
                magnitude += std::abs(w) * 2.0 * P * std::abs(field[n * K + k]) * std::abs(dhg[a * K + k]);
            }
            // Below this the sum is rounding residue (e.g. a lone antenna right
            // above its user), which max-norm scaling would blow up to a full step.
            grad[a] = std::abs(g) <= gradient_cancellation_floor * magnitude ? 0.0 : g;
        }
    }
    return grad;
}

double step_size(int tau, int t, const PgaSettings& settings) {
    if (tau < 1 || t < 1) throw std::invalid_argument("step_size: tau and t start at 1");
    const double index = static_cast<double>(tau) + static_cast<double>(settings.tau_max) * (t - 1);
    return settings.step_base / std::pow(index, settings.step_exponent);
}

InnerLoopResult pga_inner_loop(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                               const Placement& start, std::span<const double> gamma, std::span<const double> zeta,
                               const PgaSettings& settings, int t) {
    InnerLoopResult result{start, 0};
    std::vector<double> x = start.flatten();
    Placement trial = start;
    const double stop = settings.inner_tol * config.waveguide_length;
    for (int tau = 1; tau <= settings.tau_max; ++tau) {
        const auto grad = gradient_F(config, scenario, assignment, result.placement, gamma, zeta);
        double mu = step_size(tau, t, settings);
        double largest = 0.0;
        for (double g : grad) {
            if (!std::isfinite(g)) throw std::runtime_error("pga_inner_loop: non-finite gradient");
            largest = std::max(largest, std::abs(g));
        }
        if (settings.scaling == GradientScaling::max_norm) mu = largest > 0.0 ? mu / largest : 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += mu * grad[i];
        trial.assign_flat(x);
        Placement next = project(settings.projection, trial, config);
        const auto next_flat = next.flatten();
        const auto prev_flat = result.placement.flatten();
        double change = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) change = std::max(change, std::abs(next_flat[i] - prev_flat[i]));
        x = next_flat;
        result.placement = std::move(next);
        result.iterations = tau;
        if (change < stop) break;
    }
    return result;
}

namespace {

Placement initial_placement(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                            InitMode mode, std::uint64_t seed) {
    if (mode == InitMode::cup) return place_cup(config, scenario, assignment);
    Rng rng(seed);
    Placement p = Placement::shaped_like(assignment);
    for (std::size_t n = 0; n < p.coords.size(); ++n)
        p.coords[n] = sample_feasible_uniform(rng, GroupSpec{config.waveguide_length, config.min_spacing,
                                                             assignment.groups[n].size()});
    return p;
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw std::runtime_error(std::string("solve: non-finite ") + what);
}

}  // namespace

SolveReport solve(const SystemConfig& config, const Scenario& scenario, const PgaSettings& settings,
                  InitMode init_mode, std::uint64_t init_seed) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    settings.validate();
    validate_scenario(config, scenario);
    const Assignment assignment = assign_users(config, scenario);
    if (!GroupSpec{config.waveguide_length, config.min_spacing, assignment.largest_group()}.feasible())
        throw std::invalid_argument("solve: a waveguide serves more users than fit at d_min spacing");

    SolveReport report;
    Placement x = initial_placement(config, scenario, assignment, init_mode, init_seed);
    ChannelMatrix channels = effective_channels(config, scenario, assignment, x);
    {
        const auto initial = sinr_and_rates(channels);
        report.initial_mean_rate = initial.mean_rate;
        report.cap_violations = sinr_cap_violations(assignment, initial.sinr);
    }

    for (int t = 1; t <= settings.t_max; ++t) {
        const auto gamma = update_gamma(channels);
        const auto zeta = update_zeta(channels, gamma);
        require_finite(gamma, "gamma");
        require_finite(zeta, "zeta");
        const double F_before = objective_F(channels, gamma, zeta);

        auto inner = pga_inner_loop(config, scenario, assignment, x, gamma, zeta, settings, t);
        x = std::move(inner.placement);
        channels = effective_channels(config, scenario, assignment, x);

        const auto metrics = sinr_and_rates(channels);
        const auto gamma_next = update_gamma(channels);
        const double F_after = objective_F(channels, gamma_next, update_zeta(channels, gamma_next));
        require_finite(std::span<const double>(&F_after, 1), "objective");

        report.cap_violations += sinr_cap_violations(assignment, metrics.sinr);
        report.rate_trace.push_back(metrics.mean_rate);
        report.objective_trace.push_back(F_after);
        report.inner_iterations.push_back(inner.iterations);
        report.outer_iterations = t;

        if (std::abs(F_after - F_before) <= settings.outer_tol * std::abs(F_before)) {
            report.converged = true;
            break;
        }
    }

    const auto metrics = sinr_and_rates(channels);
    report.placement = std::move(x);
    report.sinr = metrics.sinr;
    report.rates = metrics.rates;
    report.mean_rate = metrics.mean_rate;
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace pasopt

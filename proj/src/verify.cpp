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

#include "pasopt/verify.hpp"

#include "pasopt/projection.hpp"
#include "pasopt/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pasopt::verify {

namespace {

// Response of waveguide n's active antennas at user k, summed term by term.
cdouble waveguide_response(const SystemConfig& config, const Placement& placement, std::size_t n, const Point2& user) {
    cdouble sum{};
    for (double x : placement.coords[n])
        sum += freespace_gain(config, antenna_position(config, static_cast<int>(n), x), ground_position(user)) *
               inwaveguide_gain(config, x);
    return sum;
}

}  // namespace

DirectPowers direct_powers(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                           const Placement& placement) {
    check_shape(assignment, placement);
    const std::size_t K = scenario.size();
    DirectPowers out;
    out.signal.resize(K);
    out.interference_plus_noise.resize(K);
    const double P = config.tx_power_per_user;
    for (std::size_t k = 0; k < K; ++k) {
        const auto own = static_cast<std::size_t>(assignment.serving[k]);
        out.signal[k] = P * std::norm(waveguide_response(config, placement, own, scenario.users[k]));
        double interference = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            if (i == k) continue;
            const auto serving = static_cast<std::size_t>(assignment.serving[i]);
            interference += std::norm(waveguide_response(config, placement, serving, scenario.users[k]));
        }
        out.interference_plus_noise[k] = P * interference + config.noise_power;
    }
    return out;
}

double direct_objective_F(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                          const Placement& placement, std::span<const double> gamma, std::span<const double> zeta) {
    const auto pw = direct_powers(config, scenario, assignment, placement);
    double F = 0.0;
    for (std::size_t k = 0; k < pw.signal.size(); ++k) {
        const double A = pw.signal[k];
        const double B = pw.interference_plus_noise[k];
        F += std::log(1.0 + gamma[k]) - gamma[k] + 2.0 * zeta[k] * std::sqrt((1.0 + gamma[k]) * A) -
             zeta[k] * zeta[k] * (A + B);
    }
    return F;
}

double direct_placement_terms(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                              const Placement& placement, std::span<const double> gamma,
                              std::span<const double> zeta) {
    const auto pw = direct_powers(config, scenario, assignment, placement);
    double F = 0.0;
    for (std::size_t k = 0; k < pw.signal.size(); ++k) {
        const double A = pw.signal[k];
        const double B = pw.interference_plus_noise[k];
        F += 2.0 * zeta[k] * std::sqrt((1.0 + gamma[k]) * A) - zeta[k] * zeta[k] * (A + B);
    }
    return F;
}

double direct_mean_rate(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                        const Placement& placement) {
    const auto pw = direct_powers(config, scenario, assignment, placement);
    double total = 0.0;
    for (std::size_t k = 0; k < pw.signal.size(); ++k)
        total += std::log2(1.0 + pw.signal[k] / pw.interference_plus_noise[k]);
    return total / static_cast<double>(pw.signal.size());
}

namespace {

// Ridders' method: a Neville table of central differences at shrinking steps.
template <class Fn>
double ridders_derivative(Fn&& f, double h) {
    constexpr int levels = 10;
    constexpr double shrink = 1.4;
    constexpr double shrink2 = shrink * shrink;
    constexpr double safe = 2.0;
    double table[levels][levels];
    table[0][0] = (f(h) - f(-h)) / (2.0 * h);
    double best = table[0][0];
    double err = std::numeric_limits<double>::max();
    for (int i = 1; i < levels; ++i) {
        h /= shrink;
        table[0][i] = (f(h) - f(-h)) / (2.0 * h);
        double fac = shrink2;
        for (int j = 1; j <= i; ++j) {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= shrink2;
            const double e = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                      std::abs(table[j][i] - table[j - 1][i - 1]));
            if (e <= err) {
                err = e;
                best = table[j][i];
            }
        }
        if (std::abs(table[i][i] - table[i - 1][i - 1]) >= safe * err) break;
    }
    return best;
}

}  // namespace

std::vector<double> fd_gradient_F(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                                  const Placement& placement, std::span<const double> gamma,
                                  std::span<const double> zeta, double step, Stencil stencil) {
    const auto base = placement.flatten();
    std::vector<double> grad(base.size());
    Placement probe = placement;
    auto at = [&](std::size_t i, double offset) {
        auto x = base;
        x[i] += offset;
        probe.assign_flat(x);
        return direct_placement_terms(config, scenario, assignment, probe, gamma, zeta);
    };
    for (std::size_t i = 0; i < base.size(); ++i) {
        switch (stencil) {
            case Stencil::central2:
                grad[i] = (at(i, step) - at(i, -step)) / (2.0 * step);
                break;
            case Stencil::central4:
                grad[i] = (-at(i, 2.0 * step) + 8.0 * at(i, step) - 8.0 * at(i, -step) + at(i, -2.0 * step)) /
                          (12.0 * step);
                break;
            case Stencil::central6:
                grad[i] = (at(i, 3.0 * step) - 9.0 * at(i, 2.0 * step) + 45.0 * at(i, step) -
                           45.0 * at(i, -step) + 9.0 * at(i, -2.0 * step) - at(i, -3.0 * step)) /
                          (60.0 * step);
                break;
            case Stencil::ridders:
                grad[i] = ridders_derivative([&](double offset) { return at(i, offset); }, step);
                break;
        }
    }
    return grad;
}

double max_relative_error(std::span<const double> analytic, std::span<const double> reference,
                          double relative_floor) {
    if (analytic.size() != reference.size()) throw std::invalid_argument("max_relative_error: size mismatch");
    double scale = 0.0;
    for (double v : reference) scale = std::max(scale, std::abs(v));
    const double floor = relative_floor * scale;
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max({std::abs(analytic[i]), std::abs(reference[i]), floor});
        if (denom == 0.0) continue;
        worst = std::max(worst, std::abs(analytic[i] - reference[i]) / denom);
    }
    return worst;
}

GradcheckResult run_gradcheck(std::uint64_t seed, int instances, const SystemConfig& base) {
    const auto started = std::chrono::steady_clock::now();
    GradcheckResult result;
    for (int inst = 0; inst < instances; ++inst) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(inst)));
        SystemConfig config = base;
        config.num_waveguides = 2 + static_cast<int>(rng.unit() * 2.0);
        const int K = 2 + static_cast<int>(rng.unit() * 5.0);

        Scenario scenario;
        scenario.rng_seed = seed;
        for (int k = 0; k < K; ++k)
            scenario.users.push_back({rng.uniform(0.0, config.waveguide_length), rng.uniform(0.0, config.region_depth)});
        const Assignment assignment = assign_users(config, scenario);

        Placement placement = Placement::shaped_like(assignment);
        for (std::size_t n = 0; n < placement.coords.size(); ++n) {
            auto coords = sample_feasible_uniform(
                rng, GroupSpec{config.waveguide_length, config.min_spacing, assignment.groups[n].size()});
            std::reverse(coords.begin(), coords.end());  // antenna order need not follow x order
            placement.coords[n] = coords;
        }
        std::vector<double> gamma(static_cast<std::size_t>(K));
        std::vector<double> zeta(static_cast<std::size_t>(K));
        for (auto& g : gamma) g = rng.uniform(0.0, 5.0);
        for (auto& z : zeta) z = rng.uniform(0.0, 1.0);

        const auto analytic = gradient_F(config, scenario, assignment, placement, gamma, zeta);
        const double step = 1e-6 * config.waveguide_length;
        const auto fd = fd_gradient_F(config, scenario, assignment, placement, gamma, zeta, step, Stencil::ridders);
        const auto fd2 = fd_gradient_F(config, scenario, assignment, placement, gamma, zeta, step, Stencil::central2);

        GradcheckInstance gi;
        gi.num_waveguides = config.num_waveguides;
        gi.num_users = K;
        gi.max_rel_error = max_relative_error(analytic, fd);
        gi.max_rel_error_2pt = max_relative_error(analytic, fd2);
        result.max_rel_error = std::max(result.max_rel_error, gi.max_rel_error);
        result.max_rel_error_2pt = std::max(result.max_rel_error_2pt, gi.max_rel_error_2pt);
        result.instances.push_back(gi);
    }
    result.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace pasopt::verify

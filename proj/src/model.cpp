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

#include "pasopt/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pasopt {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string("SystemConfig: ") + name + " must be positive and finite");
}

}  // namespace

void SystemConfig::validate() const {
    if (num_waveguides < 2)
        throw std::invalid_argument("SystemConfig: num_waveguides must be at least 2");
    require_positive(waveguide_length, "waveguide_length");
    require_positive(region_depth, "region_depth");
    require_positive(height, "height");
    require_positive(carrier_freq, "carrier_freq");
    require_positive(n_eff, "n_eff");
    require_positive(tx_power_per_user, "tx_power_per_user");
    require_positive(noise_power, "noise_power");
    require_positive(min_spacing, "min_spacing");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void validate_scenario(const SystemConfig& config, const Scenario& scenario) {
    if (scenario.users.empty())
        throw std::invalid_argument("Scenario: at least one user is required");
    for (std::size_t k = 0; k < scenario.users.size(); ++k) {
        const auto& u = scenario.users[k];
        if (!(u.x >= 0.0 && u.x <= config.waveguide_length && u.y >= 0.0 && u.y <= config.region_depth))
            throw std::invalid_argument("Scenario: user " + std::to_string(k) + " lies outside the region");
    }
}

bool spacing_admits(const SystemConfig& config, std::size_t num_users) {
    if (num_users <= 1) return true;
    return config.waveguide_length >= static_cast<double>(num_users - 1) * config.min_spacing - 1e-12;
}

std::size_t Assignment::largest_group() const {
    std::size_t best = 0;
    for (const auto& g : groups) best = std::max(best, g.size());
    return best;
}

std::size_t Placement::size() const {
    std::size_t total = 0;
    for (const auto& c : coords) total += c.size();
    return total;
}

std::vector<double> Placement::flatten() const {
    std::vector<double> flat;
    flat.reserve(size());
    for (const auto& c : coords) flat.insert(flat.end(), c.begin(), c.end());
    return flat;
}

void Placement::assign_flat(std::span<const double> flat) {
    if (flat.size() != size()) throw std::invalid_argument("Placement: flat vector has wrong length");
    std::size_t pos = 0;
    for (auto& c : coords)
        for (auto& v : c) v = flat[pos++];
}

Placement Placement::shaped_like(const Assignment& assignment) {
    Placement p;
    p.coords.resize(assignment.groups.size());
    for (std::size_t n = 0; n < assignment.groups.size(); ++n) p.coords[n].assign(assignment.groups[n].size(), 0.0);
    return p;
}

double waveguide_y(const SystemConfig& config, int n) {
    if (n < 0 || n >= config.num_waveguides)
        throw std::out_of_range("waveguide_y: index " + std::to_string(n) + " out of range");
    return static_cast<double>(n) * config.region_depth / static_cast<double>(config.num_waveguides - 1);
}

Assignment assign_users(const SystemConfig& config, const Scenario& scenario) {
    Assignment a;
    a.serving.resize(scenario.users.size());
    a.groups.resize(static_cast<std::size_t>(config.num_waveguides));
    for (std::size_t k = 0; k < scenario.users.size(); ++k) {
        int best = 0;
        double best_dist = std::abs(scenario.users[k].y - waveguide_y(config, 0));
        for (int n = 1; n < config.num_waveguides; ++n) {
            const double dist = std::abs(scenario.users[k].y - waveguide_y(config, n));
            if (dist < best_dist) {  // strict: ties stay with the lower index
                best = n;
                best_dist = dist;
            }
        }
        a.serving[k] = best;
        a.groups[static_cast<std::size_t>(best)].push_back(static_cast<int>(k));
    }
    return a;
}

cdouble inwaveguide_gain(const SystemConfig& config, double x_pin) {
    const double phase = 2.0 * std::numbers::pi * config.n_eff * x_pin / config.wavelength();
    return std::polar(1.0, -phase);
}

cdouble freespace_gain(const SystemConfig& config, const Point3& antenna, const Point3& user) {
    const double lambda = config.wavelength();
    const double dx = user.x - antenna.x;
    const double dy = user.y - antenna.y;
    const double dz = user.z - antenna.z;
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    return std::polar(lambda / (4.0 * std::numbers::pi * r), -2.0 * std::numbers::pi * r / lambda);
}

Point3 antenna_position(const SystemConfig& config, int waveguide, double x_pin) {
    return {x_pin, waveguide_y(config, waveguide), config.height};
}

void check_shape(const Assignment& assignment, const Placement& placement) {
    if (placement.coords.size() != assignment.groups.size())
        throw std::invalid_argument("Placement: waveguide count does not match the assignment");
    for (std::size_t n = 0; n < assignment.groups.size(); ++n)
        if (placement.coords[n].size() != assignment.groups[n].size())
            throw std::invalid_argument("Placement: waveguide " + std::to_string(n) +
                                        " antenna count does not match its served users");
}

ChannelMatrix effective_channels(const SystemConfig& config, const Scenario& scenario,
                                 const Assignment& assignment, const Placement& placement) {
    check_shape(assignment, placement);
    if (assignment.num_users() != scenario.size())
        throw std::invalid_argument("effective_channels: assignment and scenario disagree on K");

    const std::size_t K = scenario.size();
    const std::size_t N = assignment.num_waveguides();

    // Superposed response of each waveguide at each user; empty waveguides stay zero.
    std::vector<cdouble> per_waveguide(N * K, cdouble{});
    for (std::size_t n = 0; n < N; ++n) {
        for (double x : placement.coords[n]) {
            const Point3 ant = antenna_position(config, static_cast<int>(n), x);
            const cdouble g = inwaveguide_gain(config, x);
            for (std::size_t k = 0; k < K; ++k)
                per_waveguide[n * K + k] += freespace_gain(config, ant, ground_position(scenario.users[k])) * g;
        }
    }

    ChannelMatrix ch;
    ch.num_users = K;
    ch.effective.resize(K * K);
    for (std::size_t i = 0; i < K; ++i) {
        const auto n = static_cast<std::size_t>(assignment.serving[i]);
        for (std::size_t k = 0; k < K; ++k) ch.effective[i * K + k] = per_waveguide[n * K + k];
    }

    const double P = config.tx_power_per_user;
    ch.signal_power.resize(K);
    ch.interference_plus_noise.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double interference = 0.0;
        for (std::size_t i = 0; i < K; ++i)
            if (i != k) interference += std::norm(ch.at(i, k));
        ch.signal_power[k] = P * std::norm(ch.at(k, k));
        ch.interference_plus_noise[k] = P * interference + config.noise_power;
    }
    return ch;
}

LinkMetrics sinr_and_rates(const ChannelMatrix& channels) {
    const std::size_t K = channels.num_users;
    LinkMetrics m;
    m.sinr.resize(K);
    m.rates.resize(K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        m.sinr[k] = channels.signal_power[k] / channels.interference_plus_noise[k];
        m.rates[k] = std::log2(1.0 + m.sinr[k]);
        total += m.rates[k];
    }
    m.mean_rate = K ? total / static_cast<double>(K) : 0.0;
    return m;
}

LinkMetrics evaluate(const SystemConfig& config, const Scenario& scenario, const Assignment& assignment,
                     const Placement& placement) {
    return sinr_and_rates(effective_channels(config, scenario, assignment, placement));
}

std::size_t sinr_cap_violations(const Assignment& assignment, std::span<const double> sinr, double tol) {
    std::size_t violations = 0;
    for (std::size_t k = 0; k < sinr.size(); ++k) {
        const auto& group = assignment.groups[static_cast<std::size_t>(assignment.serving[k])];
        const std::size_t q = group.size() - 1;
        if (q >= 1 && sinr[k] > 1.0 / static_cast<double>(q) + tol) ++violations;
    }
    return violations;
}

}  // namespace pasopt

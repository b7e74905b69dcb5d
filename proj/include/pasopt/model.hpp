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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pasopt {

inline constexpr double speed_of_light = 299'792'458.0;

using cdouble = std::complex<double>;

/// Physical and simulation constants. Defaults are the reference setting
/// (28 GHz, 10 m x 10 m region, 3 m waveguide height, -90 dBm noise).
struct SystemConfig {
    int num_waveguides = 6;          // N
    double waveguide_length = 10.0;  // x_max [m]
    double region_depth = 10.0;      // y_max [m]
    double height = 3.0;             // d [m]
    double carrier_freq = 28.0e9;    // f_c [Hz]
    double n_eff = 1.4;
    double tx_power_per_user = 1.0;  // P [W]
    double noise_power = 1.0e-12;    // sigma^2 [W]
    double min_spacing = 0.1;        // d_min [m]

    double wavelength() const { return speed_of_light / carrier_freq; }

    // Throws std::invalid_argument on non-positive quantities or N < 2.
    void validate() const;
};

double dbm_to_watts(double dbm);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// User positions in the ground plane.
struct Scenario {
    std::vector<Point2> users;
    std::uint64_t rng_seed = 0;

    std::size_t size() const { return users.size(); }
};

// Throws std::invalid_argument if K == 0 or a user lies outside the region.
void validate_scenario(const SystemConfig& config, const Scenario& scenario);

/// Whether x_max >= (K-1) d_min, i.e. every possible grouping of K users is placeable.
bool spacing_admits(const SystemConfig& config, std::size_t num_users);

/// Serving waveguide per user and the users served by each waveguide.
/// Waveguide and user indices are 0-based.
struct Assignment {
    std::vector<int> serving;
    std::vector<std::vector<int>> groups;

    std::size_t num_users() const { return serving.size(); }
    std::size_t num_waveguides() const { return groups.size(); }
    std::size_t largest_group() const;
};

/// Active-antenna x-coordinates, one list per waveguide. coords[n][j] is the
/// antenna activated for user groups[n][j].
struct Placement {
    std::vector<std::vector<double>> coords;

    std::size_t size() const;
    // Waveguide-major concatenation; the layout used by gradients.
    std::vector<double> flatten() const;
    void assign_flat(std::span<const double> flat);
    static Placement shaped_like(const Assignment& assignment);
};

/// Effective channels c[i][k]: the superposed response of user i's serving
/// waveguide evaluated at user k, with the signal and interference powers
/// derived from them.
struct ChannelMatrix {
    std::size_t num_users = 0;
    std::vector<cdouble> effective;                // row-major, c[i][k] at i*K + k
    std::vector<double> signal_power;              // A_k
    std::vector<double> interference_plus_noise;   // B_k

    const cdouble& at(std::size_t i, std::size_t k) const { return effective[i * num_users + k]; }
};

struct LinkMetrics {
    std::vector<double> sinr;
    std::vector<double> rates;  // bits/s/Hz
    double mean_rate = 0.0;
};

/// y-coordinate of waveguide n (0-based): n * y_max / (N - 1).
double waveguide_y(const SystemConfig& config, int n);

/// Maps every user to its nearest waveguide; equidistant ties go to the lower index.
Assignment assign_users(const SystemConfig& config, const Scenario& scenario);

/// Phase accumulated from the feed point (x = 0) to an antenna at x_pin.
cdouble inwaveguide_gain(const SystemConfig& config, double x_pin);

/// Spherical-wave line-of-sight gain lambda e^{-j 2 pi r / lambda} / (4 pi r).
cdouble freespace_gain(const SystemConfig& config, const Point3& antenna, const Point3& user);

Point3 antenna_position(const SystemConfig& config, int waveguide, double x_pin);
inline Point3 ground_position(const Point2& user) { return {user.x, user.y, 0.0}; }

// Throws std::invalid_argument when the placement does not match the groups.
void check_shape(const Assignment& assignment, const Placement& placement);

ChannelMatrix effective_channels(const SystemConfig& config, const Scenario& scenario,
                                 const Assignment& assignment, const Placement& placement);

LinkMetrics sinr_and_rates(const ChannelMatrix& channels);

/// Convenience: channels followed by rates.
LinkMetrics evaluate(const SystemConfig& config, const Scenario& scenario,
                     const Assignment& assignment, const Placement& placement);

/// Number of users whose SINR exceeds 1/q + tol, where q >= 1 is the number of
/// other users on the same waveguide. Always zero for a correct channel model.
std::size_t sinr_cap_violations(const Assignment& assignment, std::span<const double> sinr,
                                double tol = 1e-9);

}  // namespace pasopt

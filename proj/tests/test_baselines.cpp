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

#include "doctest.h"

#include "pasopt/baselines.hpp"
#include "pasopt/projection.hpp"

#include <cmath>

using namespace pasopt;

namespace {

struct Setup {
    SystemConfig config;
    Scenario scenario;
    Assignment assignment;
};

// All users on waveguide 0 (y = 0) unless given otherwise.
Setup on_first_waveguide(std::vector<double> xs, double d_min = 0.1) {
    Setup s;
    s.config.min_spacing = d_min;
    for (double x : xs) s.scenario.users.push_back({x, 0.0});
    s.assignment = assign_users(s.config, s.scenario);
    return s;
}

}  // namespace

TEST_CASE("CUP: antennas above users when already spaced") {
    const auto s = on_first_waveguide({1.0, 7.5, 3.3});
    const auto p = place_cup(s.config, s.scenario, s.assignment);
    CHECK(p.coords[0] == std::vector<double>{1.0, 7.5, 3.3});
}

TEST_CASE("CUP: co-located users are pushed apart by the alg1 projection") {
    const auto s = on_first_waveguide({5.0, 5.0}, 0.2);
    const auto p = place_cup(s.config, s.scenario, s.assignment);
    CHECK(p.coords[0][0] == doctest::Approx(4.8).epsilon(1e-12));
    CHECK(p.coords[0][1] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("CUP: single user and vanishing spacing") {
    const auto one = on_first_waveguide({10.0});
    CHECK(place_cup(one.config, one.scenario, one.assignment).coords[0] == std::vector<double>{10.0});
    const auto close = on_first_waveguide({2.0, 2.0 + 1e-7, 2.0 + 3e-7}, 1e-9);
    CHECK(place_cup(close.config, close.scenario, close.assignment).coords[0] ==
          std::vector<double>{2.0, 2.0 + 1e-7, 2.0 + 3e-7});
}

TEST_CASE("UPCS: nearest distinct grid points, ties to the lower point") {
    auto s = on_first_waveguide({3.14});
    auto r = place_upcs(s.config, s.scenario, s.assignment, 0.1);
    CHECK(r.placement.coords[0][0] == doctest::Approx(3.1).epsilon(1e-12));
    CHECK_FALSE(r.projection_applied);

    s = on_first_waveguide({3.14, 3.16});
    r = place_upcs(s.config, s.scenario, s.assignment, 0.1);
    CHECK(r.placement.coords[0][0] == doctest::Approx(3.1).epsilon(1e-12));
    CHECK(r.placement.coords[0][1] == doctest::Approx(3.2).epsilon(1e-12));

    s = on_first_waveguide({3.15});
    r = place_upcs(s.config, s.scenario, s.assignment, 0.1);
    CHECK(r.placement.coords[0][0] == doctest::Approx(3.1).epsilon(1e-12));

    // An exactly representable tie.
    CHECK(claim_nearest(std::vector<double>{3.0, 3.5}, std::vector<double>{3.25}) == std::vector<double>{3.0});
    // A latecomer takes the next free point.
    CHECK(claim_nearest(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{2.0, 2.1}) ==
          std::vector<double>{2.0, 3.0});
    CHECK_THROWS_AS(claim_nearest(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("UPCS: grid finer than d_min falls back to projection") {
    const auto s = on_first_waveguide({4.0, 4.01}, 0.2);
    const auto r = place_upcs(s.config, s.scenario, s.assignment, 0.1);
    CHECK(r.projection_applied);
    CHECK(is_feasible(r.placement, s.config));
}

TEST_CASE("RPCS: candidate count and reproducibility") {
    SystemConfig c;
    CHECK(rpcs_antenna_count(c, 5) == 5);
    c.min_spacing = 0.2;
    CHECK(rpcs_antenna_count(c, 80) == 51);

    const auto s = on_first_waveguide({1.0, 2.0, 8.0, 8.05});
    Rng a(9), b(9);
    const auto r1 = place_rpcs(s.config, s.scenario, s.assignment, a);
    const auto r2 = place_rpcs(s.config, s.scenario, s.assignment, b);
    CHECK(r1.placement.coords == r2.placement.coords);
    CHECK(is_feasible(r1.placement, s.config));
    CHECK(claim_nearest(std::vector<double>{2.0}, std::vector<double>{7.0}) == std::vector<double>{2.0});
}

TEST_CASE("RPCS: single user lands on its single candidate") {
    const auto s = on_first_waveguide({6.0});
    Rng rng(4);
    const auto r = place_rpcs(s.config, s.scenario, s.assignment, rng);
    REQUIRE(r.placement.coords[0].size() == 1);
    CHECK(r.placement.coords[0][0] >= 0.0);
    CHECK(r.placement.coords[0][0] <= 10.0);
}

TEST_CASE("baselines stay feasible on random systems") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        SystemConfig c;
        c.num_waveguides = 2 + static_cast<int>(rng.unit() * 9);
        const double spacings[] = {c.wavelength() / 2.0, 0.1, 0.2};
        c.min_spacing = spacings[trial % 3];
        Scenario s;
        const int K = 1 + static_cast<int>(rng.unit() * 100);
        for (int k = 0; k < K; ++k) s.users.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
        const auto a = assign_users(c, s);
        if (!spacing_admits(c, a.largest_group())) continue;
        CHECK(is_feasible(place_cup(c, s, a), c));
        CHECK(is_feasible(place_upcs(c, s, a).placement, c));
        CHECK(is_feasible(place_rpcs(c, s, a, rng).placement, c));
    }
}

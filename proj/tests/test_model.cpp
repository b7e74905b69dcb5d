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

#include "pasopt/model.hpp"
#include "pasopt/projection.hpp"
#include "pasopt/random.hpp"
#include "pasopt/verify.hpp"

#include <cmath>
#include <numbers>

using namespace pasopt;

namespace {

constexpr double pi = std::numbers::pi;

SystemConfig with_waveguides(int n) {
    SystemConfig c;
    c.num_waveguides = n;
    return c;
}

Scenario users_at(std::initializer_list<Point2> pts) {
    Scenario s;
    s.users = pts;
    return s;
}

}  // namespace

TEST_CASE("table defaults") {
    const SystemConfig c;
    CHECK(c.num_waveguides == 6);
    CHECK(c.waveguide_length == 10.0);
    CHECK(c.region_depth == 10.0);
    CHECK(c.height == 3.0);
    CHECK(c.carrier_freq == 28e9);
    CHECK(c.n_eff == 1.4);
    CHECK(c.tx_power_per_user == 1.0);
    CHECK(c.noise_power == doctest::Approx(dbm_to_watts(-90.0)).epsilon(1e-12));
    CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(c.wavelength() == doctest::Approx(0.010707).epsilon(1e-4));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation rejects nonsense") {
    SystemConfig c;
    c.num_waveguides = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.height = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.noise_power = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("waveguide_y") {
    const SystemConfig c;
    CHECK(waveguide_y(c, 0) == 0.0);
    CHECK(waveguide_y(c, 5) == 10.0);
    CHECK(waveguide_y(c, 2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(waveguide_y(c, 6), std::out_of_range);
    CHECK_THROWS_AS(waveguide_y(c, -1), std::out_of_range);
}

TEST_CASE("assign_users: nearest waveguide, ties to the lower index") {
    const SystemConfig six;
    auto a = assign_users(six, users_at({{1.0, 0.0}, {1.0, 3.9}, {1.0, 10.0}}));
    CHECK(a.serving == std::vector<int>{0, 2, 5});

    // Two waveguides 10 m apart; y = 5 is equidistant.
    const SystemConfig two = with_waveguides(2);
    CHECK(assign_users(two, users_at({{0.0, 5.0}})).serving[0] == 0);

    // Six waveguides 2 m apart: y = 1 sits between waveguides 0 and 1.
    CHECK(assign_users(six, users_at({{0.0, 1.0}})).serving[0] == 0);

    a = assign_users(six, users_at({{0.0, 0.0}, {0.0, 0.1}, {0.0, 9.9}}));
    REQUIRE(a.groups.size() == 6);
    CHECK(a.groups[0] == std::vector<int>{0, 1});
    CHECK(a.groups[5] == std::vector<int>{2});
    CHECK(a.largest_group() == 2);
}

TEST_CASE("in-waveguide gain phases") {
    const SystemConfig c;
    const double lam = c.wavelength();
    auto g = inwaveguide_gain(c, 0.0);
    CHECK(g.real() == 1.0);
    CHECK(g.imag() == 0.0);
    g = inwaveguide_gain(c, lam / (2.0 * c.n_eff));
    CHECK(g.real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(g.imag()) < 1e-12);
    g = inwaveguide_gain(c, lam / (4.0 * c.n_eff));
    CHECK(std::abs(g.real()) < 1e-12);
    CHECK(g.imag() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(inwaveguide_gain(c, 7.3)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("free-space gain") {
    const SystemConfig c;
    const double lam = c.wavelength();
    const Point3 user{2.0, 4.0, 0.0};

    // Directly beneath: r = d = 3.
    const auto h = freespace_gain(c, {2.0, 4.0, 3.0}, user);
    CHECK(std::abs(h) == doctest::Approx(lam / (4.0 * pi * 3.0)).epsilon(1e-12));
    CHECK(std::abs(h) == doctest::Approx(2.840e-4).epsilon(1e-3));

    // r = lambda: magnitude 1/(4 pi), phase wraps to zero.
    const auto h1 = freespace_gain(c, {2.0, 4.0, lam}, user);
    CHECK(std::abs(h1) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-12));
    CHECK(h1.real() == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-9));
    CHECK(std::abs(h1.imag()) < 1e-9);

    const auto near = freespace_gain(c, {2.0, 4.0, 2.5}, user);
    const auto far = freespace_gain(c, {2.0, 4.0, 5.0}, user);
    CHECK(std::abs(far) == doctest::Approx(std::abs(near) / 2.0).epsilon(1e-12));
}

TEST_CASE("single link closed form: SINR ~ 8.07e4, R ~ 16.3") {
    const SystemConfig c;
    const auto scenario = users_at({{5.0, 0.0}});
    const auto a = assign_users(c, scenario);
    Placement p = Placement::shaped_like(a);
    p.coords[0] = {5.0};
    const auto ch = effective_channels(c, scenario, a, p);
    CHECK(ch.interference_plus_noise[0] == c.noise_power);

    const double lam = c.wavelength();
    const double expected = std::pow(lam / (4.0 * pi * 3.0), 2) / 1e-12;
    const auto m = sinr_and_rates(ch);
    CHECK(m.sinr[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m.sinr[0] == doctest::Approx(8.07e4).epsilon(2e-3));
    CHECK(m.rates[0] == doctest::Approx(std::log2(1.0 + expected)).epsilon(1e-12));
    CHECK(m.rates[0] == doctest::Approx(16.3).epsilon(2e-3));
    CHECK(m.mean_rate == m.rates[0]);
}

TEST_CASE("SINR of A = B = sigma^2 is one bit") {
    ChannelMatrix ch;
    ch.num_users = 1;
    ch.effective = {cdouble(1e-6, 0.0)};
    ch.signal_power = {1e-12};
    ch.interference_plus_noise = {1e-12};
    const auto m = sinr_and_rates(ch);
    CHECK(m.sinr[0] == 1.0);
    CHECK(m.rates[0] == 1.0);
}

TEST_CASE("co-waveguide users share one effective channel") {
    const SystemConfig c;
    const auto scenario = users_at({{2.0, 0.1}, {7.0, 0.2}, {4.0, 9.5}});
    const auto a = assign_users(c, scenario);
    REQUIRE(a.serving[0] == a.serving[1]);
    Placement p = Placement::shaped_like(a);
    p.coords[0] = {2.0, 7.0};
    p.coords[5] = {4.0};
    const auto ch = effective_channels(c, scenario, a, p);
    for (std::size_t k = 0; k < 3; ++k) CHECK(ch.at(0, k) == ch.at(1, k));
}

TEST_CASE("K = 2 on different waveguides matches a literal re-summation") {
    const SystemConfig c;
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto scenario = users_at({{rng.uniform(0, 10), rng.uniform(0, 1)}, {rng.uniform(0, 10), rng.uniform(9, 10)}});
        const auto a = assign_users(c, scenario);
        REQUIRE(a.serving[0] != a.serving[1]);
        Placement p = Placement::shaped_like(a);
        p.coords[static_cast<std::size_t>(a.serving[0])] = {rng.uniform(0, 10)};
        p.coords[static_cast<std::size_t>(a.serving[1])] = {rng.uniform(0, 10)};

        // Written out from the model, one antenna per user.
        const double lam = speed_of_light / c.carrier_freq;
        auto link = [&](int i, int k) {
            const double xa = p.coords[static_cast<std::size_t>(a.serving[i])][0];
            const double ya = 10.0 * a.serving[i] / 5.0;
            const auto& u = scenario.users[static_cast<std::size_t>(k)];
            const double r = std::sqrt((u.x - xa) * (u.x - xa) + (u.y - ya) * (u.y - ya) + 9.0);
            const double phase = -2.0 * pi * r / lam - 2.0 * pi * c.n_eff * xa / lam;
            return std::polar(lam / (4.0 * pi * r), phase);
        };
        const auto ch = effective_channels(c, scenario, a, p);
        for (int k = 0; k < 2; ++k) {
            const double A = std::norm(link(k, k));
            const double B = std::norm(link(1 - k, k)) + c.noise_power;
            CHECK(ch.signal_power[static_cast<std::size_t>(k)] == doctest::Approx(A).epsilon(1e-10));
            CHECK(ch.interference_plus_noise[static_cast<std::size_t>(k)] == doctest::Approx(B).epsilon(1e-10));
        }
        const auto direct = verify::direct_powers(c, scenario, a, p);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(direct.signal[k] == doctest::Approx(ch.signal_power[k]).epsilon(1e-12));
            CHECK(direct.interference_plus_noise[k] == doctest::Approx(ch.interference_plus_noise[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean rate round-trips through the direct re-summation") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        SystemConfig c;
        c.num_waveguides = 2 + static_cast<int>(rng.unit() * 5);
        Scenario s;
        const int K = 1 + static_cast<int>(rng.unit() * 20);
        for (int k = 0; k < K; ++k) s.users.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
        const auto a = assign_users(c, s);
        Placement p = Placement::shaped_like(a);
        for (auto& g : p.coords) g = sample_feasible_uniform(rng, GroupSpec{10.0, 0.1, g.size()});
        const auto m = evaluate(c, s, a, p);
        CHECK(verify::direct_mean_rate(c, s, a, p) == doctest::Approx(m.mean_rate).epsilon(1e-12));
    }
}

TEST_CASE("user label permutation permutes the rates") {
    const SystemConfig c;
    Rng rng(5);
    Scenario s;
    for (int k = 0; k < 12; ++k) s.users.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
    auto a = assign_users(c, s);
    Placement p = Placement::shaped_like(a);
    for (auto& g : p.coords) g = sample_feasible_uniform(rng, GroupSpec{10.0, 0.1, g.size()});
    const auto m = evaluate(c, s, a, p);

    Scenario rev = s;
    std::reverse(rev.users.begin(), rev.users.end());
    const auto ar = assign_users(c, rev);
    // Group sizes are unchanged, so the same per-waveguide coordinates apply.
    const auto mr = evaluate(c, rev, ar, p);
    for (std::size_t k = 0; k < 12; ++k) CHECK(mr.rates[11 - k] == doctest::Approx(m.rates[k]).epsilon(1e-12));
    CHECK(mr.mean_rate == doctest::Approx(m.mean_rate).epsilon(1e-13));
}

TEST_CASE("structural SINR cap holds on random placements") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        SystemConfig c;
        c.num_waveguides = 2 + static_cast<int>(rng.unit() * 9);
        Scenario s;
        const int K = 1 + static_cast<int>(rng.unit() * 60);
        for (int k = 0; k < K; ++k) s.users.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
        const auto a = assign_users(c, s);
        Placement p = Placement::shaped_like(a);
        for (auto& g : p.coords) g = sample_feasible_uniform(rng, GroupSpec{10.0, 0.1, g.size()});
        const auto m = evaluate(c, s, a, p);
        CHECK(sinr_cap_violations(a, m.sinr) == 0);
        for (std::size_t k = 0; k < m.sinr.size(); ++k) {
            const auto q = a.groups[static_cast<std::size_t>(a.serving[k])].size() - 1;
            if (q >= 1) CHECK(m.sinr[k] <= 1.0 / static_cast<double>(q) + 1e-9);
        }
    }
}

TEST_CASE("shape and scenario validation") {
    const SystemConfig c;
    const auto s = users_at({{1.0, 1.0}, {2.0, 1.0}});
    const auto a = assign_users(c, s);
    Placement p = Placement::shaped_like(a);
    p.coords[0].push_back(3.0);
    CHECK_THROWS_AS(check_shape(a, p), std::invalid_argument);
    CHECK_THROWS_AS(validate_scenario(c, users_at({{11.0, 1.0}})), std::invalid_argument);
    CHECK_THROWS_AS(validate_scenario(c, Scenario{}), std::invalid_argument);
    CHECK(spacing_admits(c, 101));
    CHECK_FALSE(spacing_admits(c, 102));
}

TEST_CASE("placement flatten round trip") {
    Placement p;
    p.coords = {{1.0, 2.0}, {}, {3.0}};
    CHECK(p.size() == 3);
    const auto flat = p.flatten();
    CHECK(flat == std::vector<double>{1.0, 2.0, 3.0});
    Placement q = p;
    q.assign_flat(std::vector<double>{4.0, 5.0, 6.0});
    CHECK(q.coords[0] == std::vector<double>{4.0, 5.0});
    CHECK(q.coords[2] == std::vector<double>{6.0});
}

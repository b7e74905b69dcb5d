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

#include "pasopt/bench.hpp"
#include "pasopt/random.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

using namespace pasopt;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.users = {8, 12};
    spec.waveguides = {3, 4};
    spec.trials = 3;
    spec.seed = 5;
    spec.solver.t_max = 2;
    spec.solver.tau_max = 10;
    return spec;
}

std::string trials_csv(const ExperimentResult& r) {
    std::ostringstream os;
    write_trials_csv(os, r, false);
    return os.str();
}

}  // namespace

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
    CHECK(trial_seed(3, 4, stream_users) == derive_seed(3, 4, stream_users));
    const double u = counter_unit(17, 3);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(counter_unit(17, 3) == u);
}

TEST_CASE("generate_scenario") {
    const SystemConfig c;
    const auto a = generate_scenario(c, 25, 99);
    const auto b = generate_scenario(c, 25, 99);
    REQUIRE(a.users.size() == 25);
    for (std::size_t k = 0; k < 25; ++k) {
        CHECK(a.users[k].x == b.users[k].x);
        CHECK(a.users[k].y == b.users[k].y);
    }
    // Counter-based draws: a larger K extends a smaller one.
    const auto longer = generate_scenario(c, 40, 99);
    for (std::size_t k = 0; k < 25; ++k) CHECK(longer.users[k].x == a.users[k].x);

    const auto one = generate_scenario(c, 1, 3);
    CHECK(one.users.size() == 1);
    CHECK(one.users[0].x >= 0.0);
    CHECK(one.users[0].x <= 10.0);
    CHECK(one.users[0].y >= 0.0);
    CHECK(one.users[0].y <= 10.0);

    const auto big = generate_scenario(c, 10'000, 1);
    double mx = 0.0, my = 0.0;
    for (const auto& u : big.users) {
        mx += u.x;
        my += u.y;
    }
    mx /= 10'000.0;
    my /= 10'000.0;
    const double sigma = 10.0 / std::sqrt(12.0 * 10'000.0);
    CHECK(std::abs(mx - 5.0) < 3.0 * sigma);
    CHECK(std::abs(my - 5.0) < 3.0 * sigma);
    CHECK_THROWS_AS(generate_scenario(c, 0, 1), std::invalid_argument);
}

TEST_CASE("one trial, one scheme gives one row") {
    ExperimentSpec spec;
    spec.trials = 1;
    spec.schemes = {Scheme::cup};
    const auto r = run_experiment(spec);
    CHECK(r.trials.size() == 1);
    CHECK(r.aggregates.size() == 1);
    CHECK(r.trials[0].rate >= 0.0);
    CHECK(std::isfinite(r.trials[0].rate));
}

TEST_CASE("aggregates equal the mean of their rows") {
    const auto r = run_experiment(small_spec());
    CHECK(r.failures.empty());
    CHECK(r.trials.size() == 4 * 4 * 3);
    std::map<std::tuple<int, int, int>, std::vector<double>> rows;
    for (const auto& t : r.trials)
        rows[{static_cast<int>(t.scheme), t.num_waveguides, t.num_users}].push_back(t.rate);
    for (const auto& a : r.aggregates) {
        const auto& v = rows.at({static_cast<int>(a.scheme), a.num_waveguides, a.num_users});
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        CHECK(a.count == static_cast<int>(v.size()));
        CHECK(a.mean_rate == doctest::Approx(mean).epsilon(1e-12));
        CHECK(a.std_error == doctest::Approx(std::sqrt(ss / (v.size() - 1) / v.size())).epsilon(1e-9));
    }
    CHECK(r.cap_violations() == 0);
    CHECK(r.infeasible() == 0);
}

TEST_CASE("rows are ordered by scheme, sweep point and trial") {
    const auto r = run_experiment(small_spec());
    for (std::size_t i = 1; i < r.trials.size(); ++i) {
        const auto& p = r.trials[i - 1];
        const auto& q = r.trials[i];
        const auto key = [](const TrialResult& t) {
            return std::make_tuple(static_cast<int>(t.scheme), t.num_waveguides, t.num_users, t.trial);
        };
        CHECK(key(p) < key(q));
    }
}

TEST_CASE("thread count does not change results") {
    auto spec = small_spec();
    const auto serial = trials_csv(run_experiment(spec));
    spec.threads = 3;
    const auto parallel = trials_csv(run_experiment(spec));
    CHECK(serial == parallel);
    CHECK(trials_csv(run_experiment(spec)) == parallel);
}

TEST_CASE("sweep points that cannot be spaced are skipped") {
    ExperimentSpec spec;
    spec.users = {5, 60};
    spec.min_spacings = {{0.2, false}};
    spec.trials = 1;
    spec.schemes = {Scheme::cup};
    const auto r = run_experiment(spec);
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].find("K=60") != std::string::npos);
    CHECK(r.trials.size() == 1);
}

TEST_CASE("CSV layout and number formatting") {
    ExperimentSpec spec;
    spec.trials = 2;
    spec.users = {6};
    spec.schemes = {Scheme::upcs, Scheme::rpcs};
    const auto r = run_experiment(spec);
    std::ostringstream os;
    write_trials_csv(os, r);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "scheme,N,K,d_min,trial,rate_bits,outer_iters,ms");
    std::getline(in, line);
    CHECK(line.rfind("UPCS,6,6,", 0) == 0);

    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -0.0}) {
        const auto text = format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("experiment config JSON") {
    const auto spec = parse_experiment_spec(R"({
        "users": [50, 60], "waveguides": [6], "min_spacings": ["lambda/2", 0.2],
        "trials": 7, "seed": 11, "schemes": ["fp", "RPCS"],
        "solver": {"t_max": 4, "projection": "exact", "init": "random"},
        "base": {"noise_power_dbm": -80},
        "threads": 2, "record_timing": false
    })");
    CHECK(spec.users == std::vector<int>{50, 60});
    REQUIRE(spec.min_spacings.size() == 2);
    CHECK(spec.min_spacings[0].half_wavelength);
    CHECK(spec.min_spacings[0].resolve(spec.base) == doctest::Approx(0.005353).epsilon(1e-3));
    CHECK(spec.min_spacings[1].meters == 0.2);
    CHECK(spec.trials == 7);
    CHECK(spec.schemes == std::vector<Scheme>{Scheme::fp, Scheme::rpcs});
    CHECK(spec.solver.t_max == 4);
    CHECK(spec.solver.projection == ProjectionKind::exact);
    CHECK(spec.init == InitMode::random);
    CHECK(spec.base.noise_power == doctest::Approx(1e-11).epsilon(1e-12));
    CHECK_FALSE(spec.record_timing);

    const auto again = parse_experiment_spec(to_json(spec));
    CHECK(to_json(again) == to_json(spec));

    CHECK_THROWS_AS(parse_experiment_spec(R"({"trials": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"trails": 5})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"solver": {"steps": 5}})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"schemes": ["GA"]})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"min_spacings": [-1]})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"users": "many"})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("{not json"), ConfigError);
    CHECK_THROWS_AS(load_experiment_spec("/nonexistent/spec.json"), ConfigError);
}

TEST_CASE("spacing and scheme parsing") {
    CHECK(parse_spacing("lambda/2").half_wavelength);
    CHECK(parse_spacing("0.2").meters == 0.2);
    CHECK(parse_spacing("lambda/2").label() == "lambda/2");
    CHECK(parse_spacing("0.1").label() == "0.1");
    CHECK(SpacingValue{1.0 / 3.0, false}.label() == "0.3333333333333333");
    CHECK_THROWS_AS(parse_spacing("0.2m"), ConfigError);
    CHECK_THROWS_AS(parse_spacing("0"), ConfigError);
    CHECK(parse_scheme("upcs") == Scheme::upcs);
    CHECK_THROWS_AS(parse_scheme("x"), ConfigError);
}

TEST_CASE("convergence traces") {
    ConvergenceSpec spec;
    spec.users = 10;
    spec.seeds = 3;
    spec.solver.t_max = 3;
    spec.solver.tau_max = 20;
    const auto traces = run_convergence(spec);
    REQUIRE(traces.size() == 3);
    for (const auto& tr : traces) {
        CHECK(tr.mean_rate.size() == 4);
        CHECK(tr.per_seed.size() == 3);
        CHECK(tr.cap_violations == 0);
        CHECK(tr.infeasible == 0);
        double first = 0.0;
        for (const auto& s : tr.per_seed) first += s[0];
        CHECK(tr.mean_rate[0] == doctest::Approx(first / 3.0).epsilon(1e-14));
    }
    CHECK(traces[0].min_spacing == doctest::Approx(SystemConfig{}.wavelength() / 2.0).epsilon(1e-15));
    std::ostringstream os;
    write_convergence_csv(os, traces[1]);
    CHECK(os.str().rfind("t,mean_rate_bits\n0,", 0) == 0);
}

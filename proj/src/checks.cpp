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

#include "pasopt/checks.hpp"

#include "pasopt/baselines.hpp"
#include "pasopt/fp_solver.hpp"
#include "pasopt/projection.hpp"
#include "pasopt/random.hpp"
#include "pasopt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace pasopt::checks {

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

std::string list(std::span<const double> v) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ']';
    return os.str();
}

void fail(CheckResult& r, const std::string& what) {
    if (r.failures++ == 0) r.detail = what;
}

struct FuzzInput {
    std::vector<double> x;
    double x_max = 10.0;
    double d = 0.1;
    bool feasible_by_construction = false;
};

constexpr double fuzz_spacings[] = {0.005, 0.1, 0.2};

FuzzInput fuzz_input(Rng& rng, std::size_t variant) {
    FuzzInput in;
    const auto M = static_cast<std::size_t>(1 + rng.unit() * 12);
    in.d = fuzz_spacings[static_cast<int>(rng.unit() * 3)];
    in.x.resize(M);
    auto& x = in.x;
    switch (variant % 8) {
        case 0:  // uniform in range
            for (auto& v : x) v = rng.uniform(0.0, in.x_max);
            break;
        case 1:  // out of range on either side
            for (auto& v : x) v = rng.uniform(-0.5 * in.x_max, 1.5 * in.x_max);
            break;
        case 2: {  // duplicates drawn from a few distinct values
            const auto distinct = 1 + static_cast<std::size_t>(rng.unit() * 3);
            std::vector<double> pool(distinct);
            for (auto& v : pool) v = rng.uniform(-0.1, in.x_max + 0.1);
            for (auto& v : x) v = pool[static_cast<std::size_t>(rng.unit() * static_cast<double>(distinct))];
            break;
        }
        case 3:  // strictly descending
            for (auto& v : x) v = rng.uniform(0.0, in.x_max);
            std::sort(x.begin(), x.end(), std::greater<>());
            break;
        case 4:  // hugging a boundary, including the exact endpoints
            for (auto& v : x) {
                const double u = rng.unit();
                if (u < 0.2)
                    v = 0.0;
                else if (u < 0.4)
                    v = in.x_max;
                else if (u < 0.7)
                    v = rng.uniform(-1e-3, 1e-3);
                else
                    v = in.x_max + rng.uniform(-1e-3, 1e-3);
            }
            break;
        case 5: {  // clustered tighter than d_min
            const double centre = rng.uniform(0.0, in.x_max);
            for (auto& v : x) v = centre + rng.uniform(-0.5, 0.5) * in.d;
            break;
        }
        case 6: {  // x_max barely admits the group
            const double stretch[] = {0.0, 1e-9, 1e-3, 0.05};
            const double need = static_cast<double>(M - 1) * in.d;
            in.x_max = M == 1 ? in.d : need * (1.0 + stretch[static_cast<int>(rng.unit() * 4)]);
            for (auto& v : x) v = rng.uniform(-0.2 * in.x_max, 1.2 * in.x_max);
            break;
        }
        default: {  // already feasible, in shuffled order
            x = sample_feasible_uniform(rng, GroupSpec{in.x_max, in.d, M});
            for (std::size_t i = M; i > 1; --i)
                std::swap(x[i - 1], x[static_cast<std::size_t>(rng.unit() * static_cast<double>(i))]);
            in.feasible_by_construction = true;
            break;
        }
    }
    return in;
}

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

double sum_sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// Random small system with a feasible placement; shared by the FP and
// baseline suites.
struct RandomSystem {
    SystemConfig config;
    Scenario scenario;
    Assignment assignment;
    Placement placement;
};

RandomSystem random_system(Rng& rng, int max_waveguides, int max_users) {
    RandomSystem s;
    s.config.num_waveguides = 2 + static_cast<int>(rng.unit() * (max_waveguides - 1));
    const double spacings[] = {s.config.wavelength() / 2.0, 0.1, 0.2};
    s.config.min_spacing = spacings[static_cast<int>(rng.unit() * 3)];
    const int K = 1 + static_cast<int>(rng.unit() * max_users);
    // Redraw until every group fits at the chosen d_min.
    do {
        s.scenario.users.clear();
        for (int k = 0; k < K; ++k)
            s.scenario.users.push_back(
                {rng.uniform(0.0, s.config.waveguide_length), rng.uniform(0.0, s.config.region_depth)});
        s.assignment = assign_users(s.config, s.scenario);
    } while (!spacing_admits(s.config, s.assignment.largest_group()));
    s.placement = Placement::shaped_like(s.assignment);
    for (auto& group : s.placement.coords)
        group = sample_feasible_uniform(rng, GroupSpec{s.config.waveguide_length, s.config.min_spacing, group.size()});
    return s;
}

}  // namespace

CheckResult projection_fuzz(std::uint64_t seed, std::size_t cases) {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "projection fuzz (alg1)";
    Rng rng(derive_seed(seed, 0, 11));
    for (std::size_t c = 0; c < cases; ++c) {
        const FuzzInput in = fuzz_input(rng, c);
        ++r.cases;
        std::vector<double> y;
        try {
            y = project_group_alg1(in.x, in.x_max, in.d);
        } catch (const std::exception& e) {
            fail(r, std::string("threw: ") + e.what() + " on " + list(in.x));
            continue;
        }
        const auto where = " x=" + list(in.x) + " x_max=" + std::to_string(in.x_max) + " d=" + std::to_string(in.d);
        if (!is_group_feasible(y, in.x_max, in.d)) {
            fail(r, "infeasible output " + list(y) + where);
            continue;
        }
        if (!bitwise_equal(project_group_alg1(y, in.x_max, in.d), y)) {
            fail(r, "not idempotent" + where);
            continue;
        }
        if ((in.feasible_by_construction || is_group_feasible(in.x, in.x_max, in.d)) && !bitwise_equal(y, in.x)) {
            fail(r, "moved a feasible input" + where);
            continue;
        }
        const auto perm = SortPermutation::of(in.x);
        bool ordered = true;
        for (std::size_t s = 1; s < perm.forward.size(); ++s)
            ordered = ordered && y[perm.forward[s]] > y[perm.forward[s - 1]];
        if (!ordered) {
            fail(r, "order not preserved " + list(y) + where);
            continue;
        }
        if (!check_chain_conditions(y, in.x_max, in.d).all()) fail(r, "chain conditions violated" + where);
    }
    r.passed = r.failures == 0 && r.cases > 0;
    if (r.passed) r.detail = "feasible, idempotent, order-preserving, feasible inputs fixed";
    r.metric = static_cast<double>(r.failures);
    r.elapsed_ms = ms_since(t0);
    return r;
}

CheckResult projection_dominance(std::uint64_t seed, std::size_t cases) {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "projection dominance (exact <= alg1)";
    Rng rng(derive_seed(seed, 0, 12));
    double worst = 1.0;
    std::size_t strict = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        const FuzzInput in = fuzz_input(rng, c);
        ++r.cases;
        const auto a = project_group_alg1(in.x, in.x_max, in.d);
        const auto e = project_group_exact(in.x, in.x_max, in.d);
        if (!is_group_feasible(e, in.x_max, in.d)) {
            fail(r, "exact output infeasible for " + list(in.x));
            continue;
        }
        const double da = euclidean_distance(a, in.x);
        const double de = euclidean_distance(e, in.x);
        if (de > da + 1e-12 * (1.0 + da)) {
            fail(r, "exact farther than alg1 (" + std::to_string(de) + " > " + std::to_string(da) + ") for " +
                        list(in.x));
            continue;
        }
        if (de > 1e-12) worst = std::max(worst, da / de);
        if (da > de * (1.0 + 1e-9) + 1e-12) ++strict;
    }
    r.metric = worst;
    r.passed = r.failures == 0 && r.cases > 0;
    if (r.passed) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "alg1 strictly suboptimal in %zu/%zu cases, worst distance ratio %.4f", strict,
                      r.cases, worst);
        r.detail = buf;
    }
    r.elapsed_ms = ms_since(t0);
    return r;
}

CheckResult projection_counterexample() {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "projection counterexample [0.5, 0.5], d_min = 0.2";
    r.cases = 1;
    const std::vector<double> x{0.5, 0.5};
    const auto a = project_group_alg1(x, 10.0, 0.2);
    const auto e = project_group_exact(x, 10.0, 0.2);
    const double da = euclidean_distance(a, x);
    const double de = euclidean_distance(e, x);
    const bool ok = std::abs(a[0] - 0.3) <= 1e-9 && std::abs(a[1] - 0.5) <= 1e-9 && std::abs(e[0] - 0.4) <= 1e-9 &&
                    std::abs(e[1] - 0.6) <= 1e-9 && std::abs(da - 0.2) <= 1e-9 &&
                    std::abs(de - std::sqrt(0.02)) <= 1e-9;
    char buf[200];
    std::snprintf(buf, sizeof buf, "alg1 %s (dist %.6f), exact %s (dist %.6f), ratio %.4f", list(a).c_str(), da,
                  list(e).c_str(), de, da / de);
    r.detail = buf;
    r.metric = da / de;
    r.failures = ok ? 0 : 1;
    r.passed = ok;
    r.elapsed_ms = ms_since(t0);
    return r;
}

std::vector<double> grid_projection(std::span<const double> coords, double x_max, double min_spacing,
                                    double resolution) {
    const std::size_t M = coords.size();
    if (M == 0) return {};
    const auto G = static_cast<std::size_t>(std::llround(x_max / resolution)) + 1;
    const auto s = static_cast<std::size_t>(std::llround(min_spacing / resolution));
    if ((M - 1) * s >= G) throw std::invalid_argument("grid_projection: group does not fit");
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(M);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double best_cost = inf;
    std::vector<double> best;
    // cost[i][g]: best cost with slot i at grid point g; from[i][g]: slot i-1's point.
    std::vector<std::vector<double>> cost(M, std::vector<double>(G));
    std::vector<std::vector<std::size_t>> from(M, std::vector<std::size_t>(G));
    do {
        for (std::size_t g = 0; g < G; ++g) {
            const double dx = static_cast<double>(g) * resolution - coords[order[0]];
            cost[0][g] = dx * dx;
        }
        for (std::size_t i = 1; i < M; ++i) {
            double run = inf;
            std::size_t arg = 0;
            for (std::size_t g = 0; g < G; ++g) {
                if (g >= s && cost[i - 1][g - s] < run) {
                    run = cost[i - 1][g - s];
                    arg = g - s;
                }
                const double dx = static_cast<double>(g) * resolution - coords[order[i]];
                cost[i][g] = run + dx * dx;
                from[i][g] = arg;
            }
        }
        const auto last = std::min_element(cost[M - 1].begin(), cost[M - 1].end());
        if (*last < best_cost) {
            best_cost = *last;
            best.assign(M, 0.0);
            std::size_t g = static_cast<std::size_t>(last - cost[M - 1].begin());
            for (std::size_t i = M; i-- > 0;) {
                best[order[i]] = static_cast<double>(g) * resolution;
                if (i > 0) g = from[i][g];
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

CheckResult projection_vs_grid(std::uint64_t seed, std::size_t cases, double resolution) {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "exact projection vs grid search";
    Rng rng(derive_seed(seed, 0, 13));
    const double x_max = 2.0;
    const double spacings[] = {0.1, 0.2, 0.3};
    double worst = 0.0;
    for (std::size_t c = 0; c < cases; ++c) {
        const auto M = static_cast<std::size_t>(1 + rng.unit() * 4);
        const double d = spacings[static_cast<int>(rng.unit() * 3)];
        std::vector<double> x(M);
        const bool clustered = c % 2 == 1;
        const double centre = rng.uniform(0.0, x_max);
        for (auto& v : x) v = clustered ? centre + rng.uniform(-d, d) : rng.uniform(-0.3, x_max + 0.3);
        ++r.cases;
        const auto e = project_group_exact(x, x_max, d);
        const auto g = grid_projection(x, x_max, d, resolution);
        const double fe = sum_sq_dist(e, x);
        const double fg = sum_sq_dist(g, x);
        // The exact minimiser can only beat the grid; strong convexity of the
        // squared distance then bounds how far apart the two minimisers sit,
        // given that rounding the exact minimiser to the grid stays feasible.
        const double m = static_cast<double>(M);
        const double bound = std::sqrt(std::sqrt(fe) * std::sqrt(m) * resolution + m * resolution * resolution / 4.0);
        const double gap = std::sqrt(sum_sq_dist(e, g));
        worst = std::max(worst, gap);
        if (fe > fg + 1e-12) {
            fail(r, "exact worse than grid for " + list(x));
        } else if (gap > bound + 1e-9) {
            fail(r, "exact " + list(e) + " vs grid " + list(g) + " for " + list(x));
        }
    }
    r.metric = worst;
    r.passed = r.failures == 0 && r.cases > 0;
    if (r.passed) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "max |exact - grid| = %.3g at resolution %.0e", worst, resolution);
        r.detail = buf;
    }
    r.elapsed_ms = ms_since(t0);
    return r;
}

CheckResult fp_updates(std::uint64_t seed, std::size_t cases) {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "FP tightness and monotonicity";
    Rng rng(derive_seed(seed, 0, 14));
    double worst_tight = 0.0;
    std::size_t stale_zeta_drops = 0;
    auto tol = [](double a, double b) { return 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
    for (std::size_t c = 0; c < cases; ++c) {
        const auto sys = random_system(rng, 6, 12);
        const auto ch = effective_channels(sys.config, sys.scenario, sys.assignment, sys.placement);
        const std::size_t K = ch.num_users;
        std::vector<double> gamma(K);
        for (auto& g : gamma) g = std::exp(rng.uniform(-5.0, 5.0));
        std::vector<double> zeta = update_zeta(ch, gamma);
        if (c % 2 == 0) {
            for (auto& z : zeta) z *= rng.uniform(0.0, 2.0);
        } else {
            for (auto& z : zeta) z = rng.unit();
        }
        ++r.cases;
        const std::string where = " (case " + std::to_string(c) + ", K=" + std::to_string(K) + ")";

        const double F0 = objective_F(ch, gamma, zeta);
        const auto zeta_opt = update_zeta(ch, gamma);
        const double Fz = objective_F(ch, gamma, zeta_opt);
        if (Fz < F0 - tol(Fz, F0)) fail(r, "zeta update lowered F" + where);

        const auto gamma_new = update_gamma(ch);
        const double f0 = objective_f(ch, gamma);
        const double f1 = objective_f(ch, gamma_new);
        if (f1 < f0 - tol(f1, f0)) fail(r, "gamma update lowered f" + where);
        if (objective_F(ch, gamma_new, zeta) < F0 - tol(F0, F0)) ++stale_zeta_drops;

        const auto zeta_new = update_zeta(ch, gamma_new);
        const double F2 = objective_F(ch, gamma_new, zeta_new);
        if (F2 < F0 - tol(F2, F0)) fail(r, "combined update lowered F" + where);

        const auto metrics = sinr_and_rates(ch);
        double nats = 0.0;
        for (double rho : metrics.sinr) nats += std::log1p(rho);
        const double rel = std::abs(F2 - nats) / std::max(std::abs(nats), 1e-300);
        worst_tight = std::max(worst_tight, rel);
        if (rel > 1e-9) fail(r, "F after both updates differs from the ln sum rate by " + std::to_string(rel) + where);
    }
    r.metric = worst_tight;
    r.passed = r.failures == 0 && r.cases > 0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "worst tightness error %.2e; gamma update with zeta held fixed lowered F in %zu/%zu cases "
                  "(not a property of the transform)",
                  worst_tight, stale_zeta_drops, r.cases);
    if (r.passed) r.detail = buf;
    r.elapsed_ms = ms_since(t0);
    return r;
}

CheckResult baseline_feasibility(std::uint64_t seed, std::size_t cases) {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "baseline feasibility (CUP, UPCS, RPCS)";
    Rng rng(derive_seed(seed, 0, 15));
    for (std::size_t c = 0; c < cases; ++c) {
        const auto sys = random_system(rng, 10, 100);
        ++r.cases;
        const std::string where = " (case " + std::to_string(c) + ")";
        try {
            if (auto f = is_feasible(place_cup(sys.config, sys.scenario, sys.assignment), sys.config); !f)
                fail(r, "CUP: " + f.describe() + where);
            if (auto f = is_feasible(place_upcs(sys.config, sys.scenario, sys.assignment).placement, sys.config); !f)
                fail(r, "UPCS: " + f.describe() + where);
            Rng pre(derive_seed(seed, c, stream_preplacement));
            if (auto f = is_feasible(place_rpcs(sys.config, sys.scenario, sys.assignment, pre).placement, sys.config);
                !f)
                fail(r, "RPCS: " + f.describe() + where);
        } catch (const std::exception& e) {
            fail(r, std::string("threw: ") + e.what() + where);
        }
    }
    r.passed = r.failures == 0 && r.cases > 0;
    if (r.passed) r.detail = "all placements feasible";
    r.elapsed_ms = ms_since(t0);
    return r;
}

CheckResult gradient(std::uint64_t seed) {
    const auto t0 = clock::now();
    CheckResult r;
    r.name = "analytic gradient vs finite differences";
    const auto g = verify::run_gradcheck(seed, 20);
    r.cases = g.instances.size();
    for (const auto& inst : g.instances)
        if (!(inst.max_rel_error < 1e-5)) ++r.failures;
    r.metric = g.max_rel_error;
    r.passed = r.failures == 0 && r.cases == 20;
    char buf[160];
    std::snprintf(buf, sizeof buf, "max relative error %.3e (plain 2-point difference: %.3e)", g.max_rel_error,
                  g.max_rel_error_2pt);
    r.detail = buf;
    r.elapsed_ms = ms_since(t0);
    return r;
}

std::vector<CheckResult> run_all(std::uint64_t seed, bool quick) {
    std::vector<CheckResult> out;
    out.push_back(projection_fuzz(seed, quick ? 10'000 : 100'000));
    out.push_back(projection_dominance(seed, quick ? 2'000 : 10'000));
    out.push_back(projection_counterexample());
    out.push_back(projection_vs_grid(seed, quick ? 100 : 500));
    out.push_back(fp_updates(seed, 1'000));
    out.push_back(baseline_feasibility(seed, quick ? 50 : 200));
    out.push_back(gradient(seed));
    return out;
}

std::string format(const CheckResult& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "[%s] %s: %zu cases, %zu failures, %.0f ms: ", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.cases, r.failures, r.elapsed_ms);
    return buf + r.detail;
}

}  // namespace pasopt::checks

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

#include "pasopt/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pasopt {

bool GroupSpec::feasible() const {
    if (!(x_max > 0.0) || !(min_spacing >= 0.0)) return false;
    if (size <= 1) return true;
    return x_max >= static_cast<double>(size - 1) * min_spacing - feasibility_slack;
}

double GroupSpec::free_length() const {
    if (size <= 1) return x_max;
    return std::max(0.0, x_max - static_cast<double>(size - 1) * min_spacing);
}

SortPermutation SortPermutation::of(std::span<const double> values) {
    SortPermutation p;
    p.forward.resize(values.size());
    std::iota(p.forward.begin(), p.forward.end(), std::size_t{0});
    std::stable_sort(p.forward.begin(), p.forward.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    p.inverse.resize(values.size());
    for (std::size_t r = 0; r < p.forward.size(); ++r) p.inverse[p.forward[r]] = r;
    return p;
}

std::string FeasibilityReport::describe() const {
    switch (violation) {
        case Violation::none: return "feasible";
        case Violation::below_lower_bound:
            return "waveguide " + std::to_string(waveguide) + " antenna " + std::to_string(index) + " below 0";
        case Violation::above_upper_bound:
            return "waveguide " + std::to_string(waveguide) + " antenna " + std::to_string(index) + " beyond x_max";
        case Violation::spacing:
            return "waveguide " + std::to_string(waveguide) + " antenna " + std::to_string(index) +
                   " closer than d_min to its lower neighbour";
    }
    return "unknown";
}

FeasibilityReport is_group_feasible(std::span<const double> coords, double x_max, double min_spacing) {
    FeasibilityReport r;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!(coords[i] >= -feasibility_slack)) {
            r = {false, Violation::below_lower_bound, -1, i};
            return r;
        }
        if (!(coords[i] <= x_max + feasibility_slack)) {
            r = {false, Violation::above_upper_bound, -1, i};
            return r;
        }
    }
    const auto perm = SortPermutation::of(coords);
    for (std::size_t s = 1; s < perm.forward.size(); ++s) {
        const double gap = coords[perm.forward[s]] - coords[perm.forward[s - 1]];
        if (!(gap >= min_spacing - feasibility_slack)) {
            r = {false, Violation::spacing, -1, perm.forward[s]};
            return r;
        }
    }
    return r;
}

FeasibilityReport is_feasible(const Placement& placement, const SystemConfig& config) {
    for (std::size_t n = 0; n < placement.coords.size(); ++n) {
        auto r = is_group_feasible(placement.coords[n], config.waveguide_length, config.min_spacing);
        if (!r) {
            r.waveguide = static_cast<int>(n);
            return r;
        }
    }
    return {};
}

ChainConditions check_chain_conditions(std::span<const double> coords, double x_max, double min_spacing,
                                       double slack) {
    std::vector<double> s(coords.begin(), coords.end());
    std::stable_sort(s.begin(), s.end());
    ChainConditions c;
    const std::size_t M = s.size();
    if (M == 0) return c;
    c.bounds = s.front() >= -slack && s.back() <= x_max + slack;
    for (std::size_t m = 0; m + 1 < M; ++m)
        if (!(s[m] + min_spacing <= s[m + 1] + slack)) c.spacing = false;
    for (std::size_t m = 0; m < (M + 1) / 2; ++m) {
        const std::size_t j = M - 1 - m;
        const double need = static_cast<double>(j - m) * min_spacing;
        if (!(s[j] - s[m] >= need - slack * static_cast<double>(j - m + 1))) c.span = false;
    }
    return c;
}

namespace {

void require_group_feasible(std::size_t size, double x_max, double min_spacing) {
    if (!GroupSpec{x_max, min_spacing, size}.feasible())
        throw std::invalid_argument("projection: " + std::to_string(size) +
                                    " antennas cannot be spaced by d_min within [0, x_max]");
}

std::vector<double> unsort(const SortPermutation& perm, const std::vector<double>& sorted) {
    std::vector<double> out(sorted.size());
    for (std::size_t r = 0; r < sorted.size(); ++r) out[perm.forward[r]] = sorted[r];
    return out;
}

}  // namespace

std::vector<double> project_group_alg1(std::span<const double> coords, double x_max, double min_spacing) {
    const std::size_t M = coords.size();
    require_group_feasible(M, x_max, min_spacing);
    if (is_group_feasible(coords, x_max, min_spacing)) return {coords.begin(), coords.end()};

    const auto perm = SortPermutation::of(coords);
    std::vector<double> x(M);
    for (std::size_t r = 0; r < M; ++r) x[r] = coords[perm.forward[r]];

    double x_low = 0.0;
    double x_up = x_max;
    for (std::size_t m = 0; m < (M + 1) / 2; ++m) {
        const std::size_t j = M - 1 - m;
        if (m == j) {
            x[m] = std::min(x_up, std::max(x_low, x[m]));
            break;
        }
        double lower = std::max(x_low, x[m]);
        double upper = std::min(x_up, x[j]);
        const double required = static_cast<double>(j - m) * min_spacing;
        if (upper - lower < required) {
            const double dx = required - (upper - lower);
            if (lower - dx < x_low) {
                upper = upper + (dx - (lower - x_low));
                lower = x_low;
            } else {
                lower = lower - dx;
            }
        }
        x[m] = lower;
        x[j] = upper;
        x_low = lower + min_spacing;
        x_up = upper - min_spacing;
    }
    return unsort(perm, x);
}

std::vector<double> project_group_exact(std::span<const double> coords, double x_max, double min_spacing) {
    const std::size_t M = coords.size();
    require_group_feasible(M, x_max, min_spacing);
    if (M == 0) return {};

    const auto perm = SortPermutation::of(coords);
    const double upper = GroupSpec{x_max, min_spacing, M}.free_length();

    // Pool adjacent violators on z_i = x_(i) - i d; blocks hold (sum, count).
    std::vector<double> block_sum;
    std::vector<std::size_t> block_count;
    block_sum.reserve(M);
    block_count.reserve(M);
    for (std::size_t r = 0; r < M; ++r) {
        block_sum.push_back(coords[perm.forward[r]] - static_cast<double>(r) * min_spacing);
        block_count.push_back(1);
        while (block_sum.size() > 1) {
            const std::size_t b = block_sum.size() - 1;
            const double mean_prev = block_sum[b - 1] / static_cast<double>(block_count[b - 1]);
            const double mean_last = block_sum[b] / static_cast<double>(block_count[b]);
            if (mean_prev <= mean_last) break;
            block_sum[b - 1] += block_sum[b];
            block_count[b - 1] += block_count[b];
            block_sum.pop_back();
            block_count.pop_back();
        }
    }

    // Clipping the isotonic fit to the box gives the box-constrained solution.
    std::vector<double> x;
    x.reserve(M);
    for (std::size_t b = 0; b < block_sum.size(); ++b) {
        const double level = std::clamp(block_sum[b] / static_cast<double>(block_count[b]), 0.0, upper);
        for (std::size_t c = 0; c < block_count[b]; ++c)
            x.push_back(level + static_cast<double>(x.size()) * min_spacing);
    }
    return unsort(perm, x);
}

namespace {

template <class GroupFn>
Placement project_each(const Placement& placement, const SystemConfig& config, GroupFn fn) {
    Placement out;
    out.coords.reserve(placement.coords.size());
    for (const auto& group : placement.coords)
        out.coords.push_back(fn(group, config.waveguide_length, config.min_spacing));
    return out;
}

}  // namespace

Placement project_alg1(const Placement& placement, const SystemConfig& config) {
    return project_each(placement, config, [](std::span<const double> g, double xm, double d) {
        return project_group_alg1(g, xm, d);
    });
}

Placement project_exact(const Placement& placement, const SystemConfig& config) {
    return project_each(placement, config, [](std::span<const double> g, double xm, double d) {
        return project_group_exact(g, xm, d);
    });
}

Placement project(ProjectionKind kind, const Placement& placement, const SystemConfig& config) {
    return kind == ProjectionKind::exact ? project_exact(placement, config) : project_alg1(placement, config);
}

ProjectionKind parse_projection_kind(const std::string& name) {
    if (name == "alg1") return ProjectionKind::alg1;
    if (name == "exact") return ProjectionKind::exact;
    throw std::invalid_argument("unknown projection '" + name + "' (expected alg1 or exact)");
}

const char* to_string(ProjectionKind kind) { return kind == ProjectionKind::exact ? "exact" : "alg1"; }

std::vector<double> sample_feasible_uniform(Rng& rng, const GroupSpec& spec) {
    if (!spec.feasible()) throw std::invalid_argument("sample_feasible_uniform: infeasible group");
    const double free = spec.free_length();
    std::vector<double> x(spec.size);
    for (auto& v : x) v = rng.uniform(0.0, free);
    std::sort(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::min(spec.x_max, x[i] + static_cast<double>(i) * spec.min_spacing);
    return x;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("euclidean_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace pasopt

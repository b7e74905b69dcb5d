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

#include "pasopt/bench.hpp"

#include "pasopt/baselines.hpp"
#include "pasopt/projection.hpp"
#include "pasopt/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace pasopt {

using nlohmann::json;

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::fp: return "FP";
        case Scheme::cup: return "CUP";
        case Scheme::upcs: return "UPCS";
        case Scheme::rpcs: return "RPCS";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "FP") return Scheme::fp;
    if (upper == "CUP") return Scheme::cup;
    if (upper == "UPCS") return Scheme::upcs;
    if (upper == "RPCS") return Scheme::rpcs;
    throw ConfigError("unknown scheme '" + name + "' (expected FP, CUP, UPCS or RPCS)");
}

std::string SpacingValue::label() const {
    if (half_wavelength) return "lambda/2";
    // Shortest text that reads back to the same double.
    char buf[32];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, meters);
        if (std::strtod(buf, nullptr) == meters) break;
    }
    return buf;
}

SpacingValue parse_spacing(const std::string& text) {
    if (text == "lambda/2") return {0.0, true};
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !(v > 0.0)) throw ConfigError("");
        return {v, false};
    } catch (const std::exception&) {
        throw ConfigError("invalid d_min '" + text + "' (expected a positive number or lambda/2)");
    }
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void ExperimentSpec::validate() const {
    try {
        base.validate();
        solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (users.empty() || waveguides.empty() || min_spacings.empty())
        throw ConfigError("sweep lists (users, waveguides, min_spacings) must be non-empty");
    for (int k : users)
        if (k < 1) throw ConfigError("user counts must be >= 1");
    for (int n : waveguides)
        if (n < 2) throw ConfigError("waveguide counts must be >= 2");
    for (const auto& s : min_spacings)
        if (!s.half_wavelength && !(s.meters > 0.0)) throw ConfigError("d_min values must be positive");
    if (schemes.empty()) throw ConfigError("at least one scheme is required");
    if (!(grid_spacing > 0.0)) throw ConfigError("grid_spacing must be positive");
}

namespace {

template <class T>
T read_field(const json& j, const char* key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; });
        if (!ok) throw ConfigError(std::string("unknown field '") + it.key() + "' in " + where);
    }
}

SystemConfig parse_system_config(const json& j) {
    if (!j.is_object()) throw ConfigError("'base' must be an object");
    reject_unknown(j,
                   {"num_waveguides", "waveguide_length", "region_depth", "height", "carrier_freq", "n_eff",
                    "tx_power_per_user", "noise_power", "noise_power_dbm", "min_spacing"},
                   "base");
    SystemConfig c;
    c.num_waveguides = read_field(j, "num_waveguides", c.num_waveguides);
    c.waveguide_length = read_field(j, "waveguide_length", c.waveguide_length);
    c.region_depth = read_field(j, "region_depth", c.region_depth);
    c.height = read_field(j, "height", c.height);
    c.carrier_freq = read_field(j, "carrier_freq", c.carrier_freq);
    c.n_eff = read_field(j, "n_eff", c.n_eff);
    c.tx_power_per_user = read_field(j, "tx_power_per_user", c.tx_power_per_user);
    c.noise_power = read_field(j, "noise_power", c.noise_power);
    if (j.contains("noise_power_dbm")) c.noise_power = dbm_to_watts(read_field(j, "noise_power_dbm", -90.0));
    c.min_spacing = read_field(j, "min_spacing", c.min_spacing);
    return c;
}

json system_config_json(const SystemConfig& c) {
    return {{"num_waveguides", c.num_waveguides}, {"waveguide_length", c.waveguide_length},
            {"region_depth", c.region_depth},     {"height", c.height},
            {"carrier_freq", c.carrier_freq},     {"n_eff", c.n_eff},
            {"tx_power_per_user", c.tx_power_per_user}, {"noise_power", c.noise_power},
            {"min_spacing", c.min_spacing}};
}

PgaSettings parse_solver(const json& j, InitMode& init) {
    if (!j.is_object()) throw ConfigError("'solver' must be an object");
    reject_unknown(j,
                   {"step_base", "step_exponent", "tau_max", "t_max", "outer_tol", "inner_tol", "projection",
                    "scaling", "init"},
                   "solver");
    PgaSettings s;
    s.step_base = read_field(j, "step_base", s.step_base);
    s.step_exponent = read_field(j, "step_exponent", s.step_exponent);
    s.tau_max = read_field(j, "tau_max", s.tau_max);
    s.t_max = read_field(j, "t_max", s.t_max);
    s.outer_tol = read_field(j, "outer_tol", s.outer_tol);
    s.inner_tol = read_field(j, "inner_tol", s.inner_tol);
    try {
        s.projection = parse_projection_kind(read_field<std::string>(j, "projection", to_string(s.projection)));
        s.scaling = parse_gradient_scaling(read_field<std::string>(j, "scaling", to_string(s.scaling)));
        init = parse_init_mode(read_field<std::string>(j, "init", to_string(init)));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

json solver_json(const PgaSettings& s, InitMode init) {
    return {{"step_base", s.step_base},   {"step_exponent", s.step_exponent},
            {"tau_max", s.tau_max},       {"t_max", s.t_max},
            {"outer_tol", s.outer_tol},   {"inner_tol", s.inner_tol},
            {"projection", to_string(s.projection)}, {"scaling", to_string(s.scaling)},
            {"init", to_string(init)}};
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    reject_unknown(j,
                   {"base", "users", "waveguides", "min_spacings", "trials", "seed", "schemes", "solver",
                    "grid_spacing", "threads", "csv_path", "aggregate_path", "record_timing"},
                   "experiment config");
    ExperimentSpec spec;
    if (j.contains("base")) spec.base = parse_system_config(j.at("base"));
    spec.users = read_field(j, "users", spec.users);
    spec.waveguides = read_field(j, "waveguides", spec.waveguides);
    if (j.contains("min_spacings")) {
        const auto& list = j.at("min_spacings");
        if (!list.is_array()) throw ConfigError("'min_spacings' must be an array");
        spec.min_spacings.clear();
        for (const auto& v : list) {
            if (v.is_number()) {
                const double d = v.get<double>();
                if (!(d > 0.0)) throw ConfigError("d_min values must be positive");
                spec.min_spacings.push_back({d, false});
            } else if (v.is_string()) {
                spec.min_spacings.push_back(parse_spacing(v.get<std::string>()));
            } else {
                throw ConfigError("'min_spacings' entries must be numbers or \"lambda/2\"");
            }
        }
    }
    spec.trials = read_field(j, "trials", spec.trials);
    spec.seed = read_field(j, "seed", spec.seed);
    if (j.contains("schemes")) {
        spec.schemes.clear();
        for (const auto& name : read_field<std::vector<std::string>>(j, "schemes", {}))
            spec.schemes.push_back(parse_scheme(name));
    }
    if (j.contains("solver")) spec.solver = parse_solver(j.at("solver"), spec.init);
    spec.grid_spacing = read_field(j, "grid_spacing", spec.grid_spacing);
    spec.threads = read_field(j, "threads", spec.threads);
    spec.csv_path = read_field(j, "csv_path", spec.csv_path);
    spec.aggregate_path = read_field(j, "aggregate_path", spec.aggregate_path);
    spec.record_timing = read_field(j, "record_timing", spec.record_timing);
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_spec(buf.str());
}

std::string to_json(const ExperimentSpec& spec) {
    json spacings = json::array();
    for (const auto& s : spec.min_spacings) {
        if (s.half_wavelength)
            spacings.push_back("lambda/2");
        else
            spacings.push_back(s.meters);
    }
    json schemes = json::array();
    for (auto s : spec.schemes) schemes.push_back(to_string(s));
    json j = {{"base", system_config_json(spec.base)},
              {"users", spec.users},
              {"waveguides", spec.waveguides},
              {"min_spacings", spacings},
              {"trials", spec.trials},
              {"seed", spec.seed},
              {"schemes", schemes},
              {"solver", solver_json(spec.solver, spec.init)},
              {"grid_spacing", spec.grid_spacing},
              {"threads", spec.threads},
              {"csv_path", spec.csv_path},
              {"aggregate_path", spec.aggregate_path},
              {"record_timing", spec.record_timing}};
    return j.dump(2);
}

std::size_t ExperimentResult::cap_violations() const {
    std::size_t total = 0;
    for (const auto& t : trials) total += t.cap_violations;
    return total;
}

std::size_t ExperimentResult::infeasible() const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.feasible; }));
}

std::optional<double> ExperimentResult::mean_rate(Scheme scheme, int num_waveguides, int num_users,
                                                  double min_spacing) const {
    for (const auto& a : aggregates)
        if (a.scheme == scheme && a.num_waveguides == num_waveguides && a.num_users == num_users &&
            a.min_spacing == min_spacing)
            return a.mean_rate;
    return std::nullopt;
}

Scenario generate_scenario(const SystemConfig& config, int num_users, std::uint64_t seed) {
    if (num_users < 1) throw std::invalid_argument("generate_scenario: K must be >= 1");
    Scenario s;
    s.rng_seed = seed;
    s.users.reserve(static_cast<std::size_t>(num_users));
    for (int k = 0; k < num_users; ++k) {
        const auto c = 2 * static_cast<std::uint64_t>(k);
        s.users.push_back({config.waveguide_length * counter_unit(seed, c),
                           config.region_depth * counter_unit(seed, c + 1)});
    }
    return s;
}

std::uint64_t trial_seed(std::uint64_t master, int trial, std::uint64_t stream) {
    return derive_seed(master, static_cast<std::uint64_t>(trial), stream);
}

namespace {

// Runs fn(i) for i in [0, count) on `threads` workers. Each index is handled
// exactly once; results must be written to per-index slots.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < std::min(workers, count); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct SweepPoint {
    SystemConfig config;
    int num_users = 0;
};

struct UnitOutput {
    std::vector<TrialResult> results;
    std::vector<TrialFailure> failures;
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

UnitOutput run_unit(const ExperimentSpec& spec, const SweepPoint& point, int trial) {
    UnitOutput out;
    const SystemConfig& config = point.config;
    const Scenario scenario = generate_scenario(config, point.num_users, trial_seed(spec.seed, trial, stream_users));
    const Assignment assignment = assign_users(config, scenario);

    for (Scheme scheme : spec.schemes) {
        TrialResult r;
        r.scheme = scheme;
        r.num_waveguides = config.num_waveguides;
        r.num_users = point.num_users;
        r.min_spacing = config.min_spacing;
        r.trial = trial;
        try {
            const auto started = std::chrono::steady_clock::now();
            Placement placement;
            switch (scheme) {
                case Scheme::fp: {
                    auto report = solve(config, scenario, spec.solver, spec.init,
                                        trial_seed(spec.seed, trial, stream_init));
                    r.outer_iterations = report.outer_iterations;
                    r.cap_violations = report.cap_violations;
                    placement = std::move(report.placement);
                    break;
                }
                case Scheme::cup: placement = place_cup(config, scenario, assignment); break;
                case Scheme::upcs: {
                    auto b = place_upcs(config, scenario, assignment, spec.grid_spacing);
                    r.projection_applied = b.projection_applied;
                    placement = std::move(b.placement);
                    break;
                }
                case Scheme::rpcs: {
                    Rng rng(trial_seed(spec.seed, trial, stream_preplacement));
                    auto b = place_rpcs(config, scenario, assignment, rng);
                    r.preplacement_capped = b.preplacement_capped;
                    placement = std::move(b.placement);
                    break;
                }
            }
            r.ms = elapsed_ms(started);
            const auto metrics = evaluate(config, scenario, assignment, placement);
            if (!std::isfinite(metrics.mean_rate)) throw std::runtime_error("non-finite rate");
            r.rate = metrics.mean_rate;
            // FP already counted every iterate, its final placement included.
            if (scheme != Scheme::fp) r.cap_violations = sinr_cap_violations(assignment, metrics.sinr);
            r.feasible = static_cast<bool>(is_feasible(placement, config));
            out.results.push_back(r);
        } catch (const std::exception& e) {
            out.failures.push_back({scheme, r.num_waveguides, r.num_users, r.min_spacing, trial, e.what()});
        }
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto started = std::chrono::steady_clock::now();
    ExperimentResult result;

    std::vector<SweepPoint> points;
    for (int n : spec.waveguides)
        for (int k : spec.users)
            for (const auto& s : spec.min_spacings) {
                SweepPoint p{spec.base, k};
                p.config.num_waveguides = n;
                p.config.min_spacing = s.resolve(spec.base);
                if (!spacing_admits(p.config, static_cast<std::size_t>(k))) {
                    result.skipped.push_back("N=" + std::to_string(n) + " K=" + std::to_string(k) +
                                             " d_min=" + s.label());
                    continue;
                }
                points.push_back(p);
            }

    const auto trials = static_cast<std::size_t>(spec.trials);
    std::vector<UnitOutput> outputs(points.size() * trials);
    parallel_for(outputs.size(), spec.threads, [&](std::size_t u) {
        outputs[u] = run_unit(spec, points[u / trials], static_cast<int>(u % trials));
    });

    // Order: scheme (as listed), sweep point, trial.
    for (Scheme scheme : spec.schemes) {
        for (std::size_t p = 0; p < points.size(); ++p) {
            Aggregate agg{scheme, points[p].config.num_waveguides, points[p].num_users, points[p].config.min_spacing};
            double sum = 0.0;
            double sum_sq = 0.0;
            for (std::size_t t = 0; t < trials; ++t) {
                const auto& unit = outputs[p * trials + t];
                for (const auto& r : unit.results) {
                    if (r.scheme != scheme) continue;
                    result.trials.push_back(r);
                    sum += r.rate;
                    sum_sq += r.rate * r.rate;
                    ++agg.count;
                }
                for (const auto& f : unit.failures)
                    if (f.scheme == scheme) result.failures.push_back(f);
            }
            if (agg.count > 0) {
                const double n = agg.count;
                agg.mean_rate = sum / n;
                if (agg.count > 1) {
                    const double var = std::max(0.0, (sum_sq - n * agg.mean_rate * agg.mean_rate) / (n - 1.0));
                    agg.std_error = std::sqrt(var / n);
                }
            }
            result.aggregates.push_back(agg);
        }
    }
    result.wall_ms = elapsed_ms(started);
    return result;
}

void write_trials_csv(std::ostream& out, const ExperimentResult& result, bool record_timing) {
    out << "scheme,N,K,d_min,trial,rate_bits,outer_iters,ms\n";
    for (const auto& r : result.trials) {
        out << to_string(r.scheme) << ',' << r.num_waveguides << ',' << r.num_users << ','
            << format_double(r.min_spacing) << ',' << r.trial << ',' << format_double(r.rate) << ','
            << r.outer_iterations << ',' << format_double(record_timing ? r.ms : 0.0) << '\n';
    }
}

void write_aggregates_csv(std::ostream& out, const ExperimentResult& result) {
    out << "scheme,N,K,d_min,trials,mean_rate_bits,std_error\n";
    for (const auto& a : result.aggregates) {
        out << to_string(a.scheme) << ',' << a.num_waveguides << ',' << a.num_users << ','
            << format_double(a.min_spacing) << ',' << a.count << ',' << format_double(a.mean_rate) << ','
            << format_double(a.std_error) << '\n';
    }
}

std::vector<ConvergenceTrace> run_convergence(const ConvergenceSpec& spec) {
    if (spec.seeds < 1) throw ConfigError("convergence: seeds must be >= 1");
    if (spec.threads < 1) throw ConfigError("convergence: threads must be >= 1");
    PgaSettings settings = spec.solver;
    settings.outer_tol = 0.0;
    try {
        spec.base.validate();
        settings.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    std::vector<ConvergenceTrace> traces;
    for (const auto& s : spec.min_spacings) {
        ConvergenceTrace trace;
        trace.spacing = s;
        trace.min_spacing = s.resolve(spec.base);
        SystemConfig config = spec.base;
        config.min_spacing = trace.min_spacing;
        if (!spacing_admits(config, static_cast<std::size_t>(spec.users)))
            throw ConfigError("convergence: K users do not fit at d_min = " + s.label());

        trace.per_seed.resize(static_cast<std::size_t>(spec.seeds));
        std::vector<std::size_t> violations(trace.per_seed.size(), 0);
        std::vector<char> infeasible(trace.per_seed.size(), 0);
        parallel_for(trace.per_seed.size(), spec.threads, [&](std::size_t i) {
            const int trial = static_cast<int>(i);
            const Scenario scenario = generate_scenario(config, spec.users, trial_seed(spec.seed, trial, stream_users));
            const auto report = solve(config, scenario, settings, spec.init, trial_seed(spec.seed, trial, stream_init));
            auto& series = trace.per_seed[i];
            series.push_back(report.initial_mean_rate);
            series.insert(series.end(), report.rate_trace.begin(), report.rate_trace.end());
            violations[i] = report.cap_violations;
            infeasible[i] = is_feasible(report.placement, config) ? 0 : 1;
        });
        const std::size_t length = static_cast<std::size_t>(settings.t_max) + 1;
        trace.mean_rate.assign(length, 0.0);
        for (const auto& series : trace.per_seed)
            for (std::size_t t = 0; t < length; ++t) trace.mean_rate[t] += series[std::min(t, series.size() - 1)];
        for (auto& v : trace.mean_rate) v /= static_cast<double>(spec.seeds);
        for (auto v : violations) trace.cap_violations += v;
        for (auto v : infeasible) trace.infeasible += static_cast<std::size_t>(v);
        traces.push_back(std::move(trace));
    }
    return traces;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace) {
    out << "t,mean_rate_bits\n";
    for (std::size_t t = 0; t < trace.mean_rate.size(); ++t) out << t << ',' << format_double(trace.mean_rate[t]) << '\n';
}

std::string solve_report_json(const SolveReport& report, const SystemConfig& config, const Scenario& scenario,
                              const PgaSettings& settings) {
    json users = json::array();
    for (const auto& u : scenario.users) users.push_back({u.x, u.y});
    const Assignment assignment = assign_users(config, scenario);
    json j = {{"config", system_config_json(config)},
              {"wavelength", config.wavelength()},
              {"solver", solver_json(settings, InitMode::cup)},
              {"scenario", {{"rng_seed", scenario.rng_seed}, {"users", users}}},
              {"serving_waveguide", assignment.serving},
              {"placement", report.placement.coords},
              {"sinr", report.sinr},
              {"rates", report.rates},
              {"mean_rate", report.mean_rate},
              {"initial_mean_rate", report.initial_mean_rate},
              {"rate_trace", report.rate_trace},
              {"objective_trace", report.objective_trace},
              {"inner_iterations", report.inner_iterations},
              {"outer_iterations", report.outer_iterations},
              {"converged", report.converged},
              {"cap_violations", report.cap_violations},
              {"feasible", static_cast<bool>(is_feasible(report.placement, config))},
              {"wall_ms", report.wall_ms}};
    j["solver"].erase("init");
    return j.dump(2);
}

}  // namespace pasopt

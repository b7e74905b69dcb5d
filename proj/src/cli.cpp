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

#include "pasopt/cli.hpp"

#include "pasopt/bench.hpp"
#include "pasopt/checks.hpp"
#include "pasopt/projection.hpp"
#include "pasopt/random.hpp"
#include "pasopt/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace pasopt {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_check_failed = 2;

// Options shared by the solver-driven subcommands. Unset options leave the
// config-file (or built-in) value alone.
struct SolverFlags {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string projection;
    std::string scaling;
    std::string init;
    int threads = 0;

    void add(CLI::App* app) {
        app->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
        app->add_option("--seed", seed, "master seed");
        app->add_option("--projection", projection, "alg1 | exact");
        app->add_option("--scaling", scaling, "PGA step scaling: max_norm | raw");
        app->add_option("--init", init, "solver start: cup | random");
        app->add_option("--threads", threads, "worker threads");
    }

    ExperimentSpec base_spec(const CLI::App* app) const {
        ExperimentSpec spec = config_path.empty() ? ExperimentSpec{} : load_experiment_spec(config_path);
        if (app->count("--seed")) spec.seed = seed;
        try {
            if (!projection.empty()) spec.solver.projection = parse_projection_kind(projection);
            if (!scaling.empty()) spec.solver.scaling = parse_gradient_scaling(scaling);
            if (!init.empty()) spec.init = parse_init_mode(init);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (app->count("--threads")) spec.threads = threads;
        return spec;
    }
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<SpacingValue> parse_spacing_list(const std::vector<std::string>& items) {
    std::vector<SpacingValue> out;
    for (const auto& raw : items)
        for (const auto& s : split_list(raw)) out.push_back(parse_spacing(s));
    if (out.empty()) throw ConfigError("--dmin needs at least one value");
    return out;
}

std::vector<int> parse_int_list(const std::vector<std::string>& items, const char* flag) {
    std::vector<int> out;
    for (const auto& raw : items)
        for (const auto& s : split_list(raw)) {
            try {
                std::size_t used = 0;
                out.push_back(std::stoi(s, &used));
                if (used != s.size()) throw std::invalid_argument(s);
            } catch (const std::exception&) {
                throw ConfigError(std::string(flag) + ": not an integer: '" + s + "'");
            }
        }
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

std::string file_label(const SpacingValue& s) { return s.half_wavelength ? "lambda_2" : s.label(); }

int run_solve(const CLI::App* app, const SolverFlags& flags, int users, int waveguides, const std::string& dmin,
              int trial, const std::string& out_path) {
    ExperimentSpec spec = flags.base_spec(app);
    SystemConfig config = spec.base;
    if (app->count("--N")) config.num_waveguides = waveguides;
    if (!dmin.empty()) config.min_spacing = parse_spacing(dmin).resolve(config);
    if (!app->count("--K")) users = spec.users.front();
    if (users < 1) throw ConfigError("--K must be >= 1");
    if (trial < 0) throw ConfigError("--trial must be >= 0");
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const Scenario scenario = generate_scenario(config, users, trial_seed(spec.seed, trial, stream_users));
    const Assignment assignment = assign_users(config, scenario);
    if (!spacing_admits(config, assignment.largest_group()))
        throw ConfigError("a waveguide serves more users than fit at this d_min");
    const auto report = solve(config, scenario, spec.solver, spec.init, trial_seed(spec.seed, trial, stream_init));
    const std::string text = solve_report_json(report, config, scenario, spec.solver) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        open_output(out_path) << text;
        std::printf("mean rate %.6f bits/s/Hz after %d outer iterations (start %.6f); report in %s\n",
                    report.mean_rate, report.outer_iterations, report.initial_mean_rate, out_path.c_str());
    }
    return exit_ok;
}

int run_benchmark(const CLI::App* app, const SolverFlags& flags, int trials, const std::string& schemes,
                  const std::vector<std::string>& dmin, const std::vector<std::string>& users,
                  const std::vector<std::string>& waveguides, const std::string& out_path,
                  const std::string& aggregate_path, bool no_timing) {
    ExperimentSpec spec = flags.base_spec(app);
    if (app->count("--trials")) spec.trials = trials;
    if (!schemes.empty()) {
        spec.schemes.clear();
        for (const auto& s : split_list(schemes)) spec.schemes.push_back(parse_scheme(s));
    }
    if (!dmin.empty()) spec.min_spacings = parse_spacing_list(dmin);
    if (!users.empty()) spec.users = parse_int_list(users, "--K");
    if (!waveguides.empty()) spec.waveguides = parse_int_list(waveguides, "--N");
    if (!out_path.empty()) spec.csv_path = out_path;
    if (!aggregate_path.empty()) spec.aggregate_path = aggregate_path;
    if (no_timing) spec.record_timing = false;
    spec.validate();

    const auto result = run_experiment(spec);

    if (spec.csv_path.empty()) {
        write_trials_csv(std::cout, result, spec.record_timing);
    } else {
        auto csv = open_output(spec.csv_path);
        write_trials_csv(csv, result, spec.record_timing);
        nlohmann::json meta = nlohmann::json::parse(to_json(spec));
        meta["lambda_half_m"] = spec.base.wavelength() / 2.0;
        meta["resolved_min_spacings"] = nlohmann::json::array();
        for (const auto& s : spec.min_spacings) meta["resolved_min_spacings"].push_back(s.resolve(spec.base));
        meta["skipped"] = result.skipped;
        open_output(spec.csv_path + ".meta.json") << meta.dump(2) << "\n";
    }
    if (!spec.aggregate_path.empty()) {
        auto agg = open_output(spec.aggregate_path);
        write_aggregates_csv(agg, result);
    }

    // Human-readable summary on stderr so stdout stays a clean CSV.
    std::fprintf(stderr, "%-6s %3s %4s %-10s %6s %12s %10s\n", "scheme", "N", "K", "d_min", "trials", "mean_rate",
                 "std_err");
    for (const auto& a : result.aggregates)
        std::fprintf(stderr, "%-6s %3d %4d %-10.6g %6d %12.6f %10.6f\n", to_string(a.scheme), a.num_waveguides,
                     a.num_users, a.min_spacing, a.count, a.mean_rate, a.std_error);
    for (const auto& s : result.skipped) std::fprintf(stderr, "skipped: %s (x_max < (K-1) d_min)\n", s.c_str());
    for (const auto& f : result.failures)
        std::fprintf(stderr, "trial failed: %s N=%d K=%d d_min=%g trial=%d: %s\n", to_string(f.scheme),
                     f.num_waveguides, f.num_users, f.min_spacing, f.trial, f.message.c_str());
    std::fprintf(stderr, "SINR cap violations: %zu, infeasible placements: %zu, wall %.1f s\n",
                 result.cap_violations(), result.infeasible(), result.wall_ms / 1000.0);
    return exit_ok;
}

int run_convergence_cmd(const CLI::App* app, const SolverFlags& flags, int seeds, int users, int waveguides,
                        const std::vector<std::string>& dmin, const std::string& out_dir) {
    const ExperimentSpec base = flags.base_spec(app);
    ConvergenceSpec spec;
    spec.base = base.base;
    if (app->count("--N")) spec.base.num_waveguides = waveguides;
    spec.users = app->count("--K") ? users : base.users.front();
    if (!dmin.empty()) spec.min_spacings = parse_spacing_list(dmin);
    spec.seeds = seeds;
    spec.seed = base.seed;
    spec.solver = base.solver;
    spec.init = base.init;
    spec.threads = base.threads;

    const auto traces = run_convergence(spec);

    std::filesystem::create_directories(out_dir);
    nlohmann::json meta = {{"num_waveguides", spec.base.num_waveguides}, {"users", spec.users},
                           {"seeds", spec.seeds}, {"seed", spec.seed}, {"traces", nlohmann::json::array()}};
    std::printf("%-10s %-12s %12s %12s %10s\n", "d_min", "value_m", "R(t=0)", "R(t_max)", "last_step");
    for (const auto& tr : traces) {
        const auto path = (std::filesystem::path(out_dir) / ("convergence_dmin_" + file_label(tr.spacing) + ".csv")).string();
        auto out = open_output(path);
        write_convergence_csv(out, tr);
        const auto n = tr.mean_rate.size();
        const double last_step = n >= 2 ? std::abs(tr.mean_rate[n - 1] - tr.mean_rate[n - 2]) / tr.mean_rate[n - 2] : 0.0;
        std::printf("%-10s %-12.6g %12.6f %12.6f %9.3f%%\n", tr.spacing.label().c_str(), tr.min_spacing,
                    tr.mean_rate.front(), tr.mean_rate.back(), 100.0 * last_step);
        meta["traces"].push_back({{"d_min", tr.spacing.label()}, {"d_min_m", tr.min_spacing}, {"file", path},
                                  {"cap_violations", tr.cap_violations}, {"infeasible", tr.infeasible}});
    }
    open_output((std::filesystem::path(out_dir) / "convergence_meta.json").string()) << meta.dump(2) << "\n";
    return exit_ok;
}

int run_gradcheck_cmd(std::uint64_t seed, int instances) {
    if (instances < 1) throw ConfigError("--instances must be >= 1");
    const auto g = verify::run_gradcheck(seed, instances);
    for (std::size_t i = 0; i < g.instances.size(); ++i) {
        const auto& inst = g.instances[i];
        std::printf("instance %2zu  N=%d K=%d  max rel error %.3e  (2-point %.3e)\n", i, inst.num_waveguides,
                    inst.num_users, inst.max_rel_error, inst.max_rel_error_2pt);
    }
    const bool ok = g.max_rel_error < 1e-5;
    std::printf("max relative error: %.6e (%s, threshold 1e-5, %.0f ms)\n", g.max_rel_error, ok ? "ok" : "FAILED",
                g.elapsed_ms);
    return ok ? exit_ok : exit_check_failed;
}

int run_project(const std::string& input, double x_max, const std::string& dmin, const std::string& kind) {
    std::string text;
    if (input.empty() || input == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(input);
        if (!in) throw ConfigError("cannot open '" + input + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    for (auto& c : text)
        if (c == ',' || c == '[' || c == ']' || c == ';') c = ' ';
    std::vector<double> coords;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            coords.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + token + "'");
        }
    }
    SystemConfig config;
    config.waveguide_length = x_max;
    const double d = parse_spacing(dmin.empty() ? "0.1" : dmin).resolve(config);
    if (!GroupSpec{x_max, d, coords.size()}.feasible())
        throw ConfigError(std::to_string(coords.size()) + " antennas do not fit in [0, x_max] at this d_min");
    ProjectionKind k;
    try {
        k = parse_projection_kind(kind);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto out = k == ProjectionKind::alg1 ? project_group_alg1(coords, x_max, d) : project_group_exact(coords, x_max, d);
    for (double v : out) std::printf("%s\n", format_double(v).c_str());
    return exit_ok;
}

int run_selftest(std::uint64_t seed, bool full) {
    bool ok = true;
    for (const auto& r : checks::run_all(seed, !full)) {
        std::printf("%s\n", checks::format(r).c_str());
        ok = ok && r.passed;
    }
    std::printf("selftest %s\n", ok ? "passed" : "FAILED");
    return ok ? exit_ok : exit_check_failed;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Placement optimization for multi-waveguide pinching antenna systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pasopt 0.1.0");

    SolverFlags solve_flags;
    int solve_users = 50;
    int solve_waveguides = 6;
    std::string solve_dmin;
    int solve_trial = 0;
    std::string solve_out;
    auto* solve_cmd = app.add_subcommand("solve", "optimize one random scenario and print the solve report (JSON)");
    solve_flags.add(solve_cmd);
    solve_cmd->add_option("--K", solve_users, "number of users");
    solve_cmd->add_option("--N", solve_waveguides, "number of waveguides");
    solve_cmd->add_option("--dmin", solve_dmin, "minimum antenna spacing [m] or lambda/2");
    solve_cmd->add_option("--trial", solve_trial, "trial index used to derive the scenario seed");
    solve_cmd->add_option("--out", solve_out, "write the report here instead of stdout");

    SolverFlags bench_flags;
    int bench_trials = 100;
    std::string bench_schemes;
    std::vector<std::string> bench_dmin, bench_users, bench_waveguides;
    std::string bench_out, bench_aggregate;
    bool bench_no_timing = false;
    auto* bench_cmd = app.add_subcommand("benchmark", "sweep schemes over (N, K, d_min) and write per-trial CSV");
    bench_flags.add(bench_cmd);
    bench_cmd->add_option("--trials", bench_trials, "trials per sweep point");
    bench_cmd->add_option("--schemes", bench_schemes, "comma list of FP,CUP,UPCS,RPCS");
    bench_cmd->add_option("--dmin", bench_dmin, "d_min values (comma list, lambda/2 allowed)");
    bench_cmd->add_option("--K", bench_users, "user counts (comma list)");
    bench_cmd->add_option("--N", bench_waveguides, "waveguide counts (comma list)");
    bench_cmd->add_option("--out", bench_out, "per-trial CSV path (stdout if omitted)");
    bench_cmd->add_option("--aggregate", bench_aggregate, "aggregate CSV path");
    bench_cmd->add_flag("--no-timing", bench_no_timing, "write ms = 0 so reruns are byte-identical");

    SolverFlags conv_flags;
    int conv_seeds = 20;
    int conv_users = 50;
    int conv_waveguides = 6;
    std::vector<std::string> conv_dmin;
    std::string conv_out = ".";
    auto* conv_cmd = app.add_subcommand("convergence", "mean rate after each outer iteration, one file per d_min");
    conv_flags.add(conv_cmd);
    conv_cmd->add_option("--seeds", conv_seeds, "scenarios averaged per trace");
    conv_cmd->add_option("--trials", conv_seeds, "alias of --seeds");
    conv_cmd->add_option("--K", conv_users, "number of users");
    conv_cmd->add_option("--N", conv_waveguides, "number of waveguides");
    conv_cmd->add_option("--dmin", conv_dmin, "d_min values (default lambda/2,0.1,0.2)");
    conv_cmd->add_option("--out", conv_out, "output directory");

    std::uint64_t gc_seed = 7;
    int gc_instances = 20;
    auto* gc_cmd = app.add_subcommand("gradcheck", "compare the analytic gradient with finite differences");
    gc_cmd->add_option("--seed", gc_seed, "seed for the random instances");
    gc_cmd->add_option("--instances", gc_instances, "number of random instances");

    std::string proj_input;
    double proj_xmax = 10.0;
    std::string proj_dmin;
    std::string proj_kind = "alg1";
    auto* proj_cmd = app.add_subcommand("project", "project one waveguide's coordinates onto the feasible set");
    proj_cmd->add_option("--input", proj_input, "coordinate file (stdin if omitted or -)");
    proj_cmd->add_option("--xmax", proj_xmax, "waveguide length [m]");
    proj_cmd->add_option("--dmin", proj_dmin, "minimum spacing [m] or lambda/2 (default 0.1)");
    proj_cmd->add_option("--projection", proj_kind, "alg1 | exact");

    std::uint64_t st_seed = 1;
    bool st_full = false;
    auto* st_cmd = app.add_subcommand("selftest", "run the invariant suites");
    st_cmd->add_option("--seed", st_seed, "seed for the random suites");
    st_cmd->add_flag("--full", st_full, "acceptance-size case counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*solve_cmd)
            return run_solve(solve_cmd, solve_flags, solve_users, solve_waveguides, solve_dmin, solve_trial, solve_out);
        if (*bench_cmd)
            return run_benchmark(bench_cmd, bench_flags, bench_trials, bench_schemes, bench_dmin, bench_users,
                                 bench_waveguides, bench_out, bench_aggregate, bench_no_timing);
        if (*conv_cmd)
            return run_convergence_cmd(conv_cmd, conv_flags, conv_seeds, conv_users, conv_waveguides, conv_dmin,
                                       conv_out);
        if (*gc_cmd) return run_gradcheck_cmd(gc_seed, gc_instances);
        if (*proj_cmd) return run_project(proj_input, proj_xmax, proj_dmin, proj_kind);
        if (*st_cmd) return run_selftest(st_seed, st_full);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    }
    return exit_config;
}

}  // namespace pasopt

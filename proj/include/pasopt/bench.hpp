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

#include "pasopt/fp_solver.hpp"
#include "pasopt/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pasopt {

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Scheme { fp, cup, upcs, rpcs };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

/// A minimum-spacing sweep value; "lambda/2" is resolved against the carrier.
struct SpacingValue {
    double meters = 0.1;
    bool half_wavelength = false;

    double resolve(const SystemConfig& config) const { return half_wavelength ? config.wavelength() / 2.0 : meters; }
    std::string label() const;
};

SpacingValue parse_spacing(const std::string& text);

struct ExperimentSpec {
    SystemConfig base;
    std::vector<int> users{50};        // K sweep
    std::vector<int> waveguides{6};    // N sweep
    std::vector<SpacingValue> min_spacings{SpacingValue{0.1, false}};
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes{Scheme::fp, Scheme::cup, Scheme::upcs, Scheme::rpcs};
    PgaSettings solver;
    InitMode init = InitMode::cup;
    double grid_spacing = 0.1;  // UPCS
    int threads = 1;
    std::string csv_path;
    std::string aggregate_path;
    bool record_timing = true;  // false writes ms = 0 so CSV files are byte-comparable

    // Throws ConfigError.
    void validate() const;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);
std::string to_json(const ExperimentSpec& spec);

struct TrialResult {
    Scheme scheme = Scheme::fp;
    int num_waveguides = 0;
    int num_users = 0;
    double min_spacing = 0.0;
    int trial = 0;
    double rate = 0.0;  // mean per-user rate, bits/s/Hz
    int outer_iterations = 0;
    double ms = 0.0;
    std::size_t cap_violations = 0;
    bool feasible = true;
    bool projection_applied = false;
    bool preplacement_capped = false;
};

struct TrialFailure {
    Scheme scheme = Scheme::fp;
    int num_waveguides = 0;
    int num_users = 0;
    double min_spacing = 0.0;
    int trial = 0;
    std::string message;
};

struct Aggregate {
    Scheme scheme = Scheme::fp;
    int num_waveguides = 0;
    int num_users = 0;
    double min_spacing = 0.0;
    int count = 0;
    double mean_rate = 0.0;
    double std_error = 0.0;
};

struct ExperimentResult {
    std::vector<TrialResult> trials;  // sorted by (scheme, sweep point, trial)
    std::vector<Aggregate> aggregates;
    std::vector<TrialFailure> failures;
    std::vector<std::string> skipped;  // sweep points violating x_max >= (K-1) d_min
    double wall_ms = 0.0;

    std::size_t cap_violations() const;
    std::size_t infeasible() const;
    // Mean rate for a sweep point; nullopt if absent.
    std::optional<double> mean_rate(Scheme scheme, int num_waveguides, int num_users, double min_spacing) const;
};

/// K users i.i.d. uniform over the region. User k's coordinates are counter
/// draws 2k, 2k+1 of the seed's stream, so a scenario with more users extends
/// one with fewer.
Scenario generate_scenario(const SystemConfig& config, int num_users, std::uint64_t seed);

/// Seed of the scenario used by trial i of an experiment with the given master seed.
std::uint64_t trial_seed(std::uint64_t master, int trial, std::uint64_t stream);

ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_trials_csv(std::ostream& out, const ExperimentResult& result, bool record_timing = true);
void write_aggregates_csv(std::ostream& out, const ExperimentResult& result);
std::string format_double(double value);  // 17 significant digits

/// Mean-rate-per-outer-iteration study at fixed (N, K) for several d_min.
struct ConvergenceSpec {
    SystemConfig base;  // N taken from here
    int users = 50;
    std::vector<SpacingValue> min_spacings{{0.0, true}, {0.1, false}, {0.2, false}};
    int seeds = 20;
    std::uint64_t seed = 1;
    PgaSettings solver;
    InitMode init = InitMode::cup;
    int threads = 1;
};

struct ConvergenceTrace {
    SpacingValue spacing;
    double min_spacing = 0.0;
    std::vector<double> mean_rate;               // index t = 0 (initial) .. t_max
    std::vector<std::vector<double>> per_seed;   // same layout per seed
    std::size_t cap_violations = 0;
    std::size_t infeasible = 0;
};

/// Runs every seed for the full t_max outer iterations (early stopping off).
std::vector<ConvergenceTrace> run_convergence(const ConvergenceSpec& spec);

void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace);

std::string solve_report_json(const SolveReport& report, const SystemConfig& config, const Scenario& scenario,
                              const PgaSettings& settings);

}  // namespace pasopt

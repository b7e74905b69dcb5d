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

#include "pasopt/baselines.hpp"
#include "pasopt/bench.hpp"
#include "pasopt/checks.hpp"
#include "pasopt/fp_solver.hpp"
#include "pasopt/projection.hpp"
#include "pasopt/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace pasopt;

namespace {

using Users = std::vector<std::pair<double, double>>;
using Coords = std::vector<std::vector<double>>;

Scenario to_scenario(const Users& users) {
    Scenario s;
    for (const auto& [x, y] : users) s.users.push_back({x, y});
    return s;
}

Users from_scenario(const Scenario& s) {
    Users out;
    for (const auto& u : s.users) out.emplace_back(u.x, u.y);
    return out;
}

Placement to_placement(const Coords& coords) {
    Placement p;
    p.coords = coords;
    return p;
}

py::dict solve_dict(const SolveReport& r) {
    py::dict d;
    d["placement"] = r.placement.coords;
    d["sinr"] = r.sinr;
    d["rates"] = r.rates;
    d["mean_rate"] = r.mean_rate;
    d["initial_mean_rate"] = r.initial_mean_rate;
    d["rate_trace"] = r.rate_trace;
    d["objective_trace"] = r.objective_trace;
    d["inner_iterations"] = r.inner_iterations;
    d["outer_iterations"] = r.outer_iterations;
    d["converged"] = r.converged;
    d["cap_violations"] = r.cap_violations;
    d["wall_ms"] = r.wall_ms;
    return d;
}

}  // namespace

PYBIND11_MODULE(_pasopt, m) {
    m.doc() = "Placement optimization for multi-waveguide pinching antenna systems";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("num_waveguides", &SystemConfig::num_waveguides)
        .def_readwrite("waveguide_length", &SystemConfig::waveguide_length)
        .def_readwrite("region_depth", &SystemConfig::region_depth)
        .def_readwrite("height", &SystemConfig::height)
        .def_readwrite("carrier_freq", &SystemConfig::carrier_freq)
        .def_readwrite("n_eff", &SystemConfig::n_eff)
        .def_readwrite("tx_power_per_user", &SystemConfig::tx_power_per_user)
        .def_readwrite("noise_power", &SystemConfig::noise_power)
        .def_readwrite("min_spacing", &SystemConfig::min_spacing)
        .def_property_readonly("wavelength", &SystemConfig::wavelength)
        .def("validate", &SystemConfig::validate)
        .def("__repr__", [](const SystemConfig& c) {
            std::ostringstream os;
            os << "SystemConfig(N=" << c.num_waveguides << ", x_max=" << c.waveguide_length
               << ", d_min=" << c.min_spacing << ")";
            return os.str();
        });

    py::class_<PgaSettings>(m, "PgaSettings")
        .def(py::init<>())
        .def_readwrite("step_base", &PgaSettings::step_base)
        .def_readwrite("step_exponent", &PgaSettings::step_exponent)
        .def_readwrite("tau_max", &PgaSettings::tau_max)
        .def_readwrite("t_max", &PgaSettings::t_max)
        .def_readwrite("outer_tol", &PgaSettings::outer_tol)
        .def_readwrite("inner_tol", &PgaSettings::inner_tol)
        .def_property(
            "projection", [](const PgaSettings& s) { return std::string(to_string(s.projection)); },
            [](PgaSettings& s, const std::string& v) { s.projection = parse_projection_kind(v); })
        .def_property(
            "scaling", [](const PgaSettings& s) { return std::string(to_string(s.scaling)); },
            [](PgaSettings& s, const std::string& v) { s.scaling = parse_gradient_scaling(v); });

    m.def("generate_scenario",
          [](const SystemConfig& c, int K, std::uint64_t seed) { return from_scenario(generate_scenario(c, K, seed)); },
          py::arg("config"), py::arg("num_users"), py::arg("seed"), "K uniform user positions as (x, y) pairs");
    m.def("trial_seed", &trial_seed, py::arg("master"), py::arg("trial"), py::arg("stream") = 0);
    m.def("waveguide_y", &waveguide_y, py::arg("config"), py::arg("n"));
    m.def("assign_users", [](const SystemConfig& c, const Users& u) { return assign_users(c, to_scenario(u)).serving; },
          py::arg("config"), py::arg("users"), "serving waveguide (0-based) per user");

    m.def("project_alg1",
          [](const std::vector<double>& x, double x_max, double d) { return project_group_alg1(x, x_max, d); },
          py::arg("coords"), py::arg("x_max"), py::arg("min_spacing"));
    m.def("project_exact",
          [](const std::vector<double>& x, double x_max, double d) { return project_group_exact(x, x_max, d); },
          py::arg("coords"), py::arg("x_max"), py::arg("min_spacing"));
    m.def("is_group_feasible",
          [](const std::vector<double>& x, double x_max, double d) {
              return static_cast<bool>(is_group_feasible(x, x_max, d));
          },
          py::arg("coords"), py::arg("x_max"), py::arg("min_spacing"));

    m.def("evaluate",
          [](const SystemConfig& c, const Users& u, const Coords& coords) {
              const auto s = to_scenario(u);
              const auto metrics = evaluate(c, s, assign_users(c, s), to_placement(coords));
              py::dict d;
              d["sinr"] = metrics.sinr;
              d["rates"] = metrics.rates;
              d["mean_rate"] = metrics.mean_rate;
              return d;
          },
          py::arg("config"), py::arg("users"), py::arg("placement"));
    m.def("is_feasible",
          [](const SystemConfig& c, const Coords& coords) { return static_cast<bool>(is_feasible(to_placement(coords), c)); },
          py::arg("config"), py::arg("placement"));

    m.def("place_cup",
          [](const SystemConfig& c, const Users& u) {
              const auto s = to_scenario(u);
              return place_cup(c, s, assign_users(c, s)).coords;
          },
          py::arg("config"), py::arg("users"));
    m.def("place_upcs",
          [](const SystemConfig& c, const Users& u, double grid) {
              const auto s = to_scenario(u);
              return place_upcs(c, s, assign_users(c, s), grid).placement.coords;
          },
          py::arg("config"), py::arg("users"), py::arg("grid_spacing") = 0.1);
    m.def("place_rpcs",
          [](const SystemConfig& c, const Users& u, std::uint64_t seed) {
              const auto s = to_scenario(u);
              Rng rng(seed);
              return place_rpcs(c, s, assign_users(c, s), rng).placement.coords;
          },
          py::arg("config"), py::arg("users"), py::arg("seed"));

    m.def("solve",
          [](const SystemConfig& c, const Users& u, const PgaSettings& settings, const std::string& init,
             std::uint64_t init_seed) {
              SolveReport r;
              {
                  py::gil_scoped_release release;
                  r = solve(c, to_scenario(u), settings, parse_init_mode(init), init_seed);
              }
              return solve_dict(r);
          },
          py::arg("config"), py::arg("users"), py::arg("settings") = PgaSettings{}, py::arg("init") = "cup",
          py::arg("init_seed") = 0, "FP + projected gradient ascent; returns the solve report as a dict");

    m.def("gradcheck",
          [](std::uint64_t seed, int instances) {
              py::gil_scoped_release release;
              return verify::run_gradcheck(seed, instances).max_rel_error;
          },
          py::arg("seed") = 7, py::arg("instances") = 20, "max relative error of the analytic gradient");

    m.def("run_benchmark",
          [](const std::string& spec_json) {
              const auto spec = parse_experiment_spec(spec_json);
              ExperimentResult r;
              {
                  py::gil_scoped_release release;
                  r = run_experiment(spec);
              }
              std::ostringstream trials, aggregates;
              write_trials_csv(trials, r, spec.record_timing);
              write_aggregates_csv(aggregates, r);
              return py::make_tuple(trials.str(), aggregates.str());
          },
          py::arg("spec_json"), "run an experiment from a JSON spec; returns (trials_csv, aggregates_csv)");

    m.def("selftest",
          [](std::uint64_t seed) {
              std::vector<std::pair<std::string, bool>> out;
              for (const auto& r : checks::run_all(seed, true)) out.emplace_back(checks::format(r), r.passed);
              return out;
          },
          py::arg("seed") = 1);
}

# SPDX-License-Identifier: Apache-2.0
"""Placement optimization for multi-waveguide pinching antenna systems."""

from ._pasopt import (  # noqa: F401
    ConfigError,
    PgaSettings,
    SystemConfig,
    assign_users,
    evaluate,
    generate_scenario,
    gradcheck,
    is_feasible,
    is_group_feasible,
    place_cup,
    place_rpcs,
    place_upcs,
    project_alg1,
    project_exact,
    run_benchmark,
    selftest,
    solve,
    trial_seed,
    waveguide_y,
)

__version__ = "0.1.0"

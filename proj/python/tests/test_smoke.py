# SPDX-License-Identifier: Apache-2.0
import csv
import io
import json
import math

import pytest

import pasopt


def test_config_defaults():
    c = pasopt.SystemConfig()
    assert c.num_waveguides == 6
    assert c.waveguide_length == 10.0
    assert math.isclose(c.wavelength, 299792458.0 / 28e9)
    assert pasopt.waveguide_y(c, 2) == pytest.approx(4.0)


def test_projections():
    assert pasopt.project_alg1([0.5, 0.5], 10.0, 0.2) == pytest.approx([0.3, 0.5])
    assert pasopt.project_exact([0.5, 0.5], 10.0, 0.2) == pytest.approx([0.4, 0.6])
    assert pasopt.project_alg1([-1.0, 10.5], 10.0, 0.2) == pytest.approx([0.0, 10.0])
    assert pasopt.is_group_feasible(pasopt.project_exact([3.0] * 5, 10.0, 0.1), 10.0, 0.1)
    with pytest.raises(ValueError):
        pasopt.project_alg1([1.0, 2.0, 3.0], 0.3, 0.2)


def test_scenario_and_baselines():
    c = pasopt.SystemConfig()
    users = pasopt.generate_scenario(c, 30, 11)
    assert users == pasopt.generate_scenario(c, 30, 11)
    assert all(0 <= x <= 10 and 0 <= y <= 10 for x, y in users)
    serving = pasopt.assign_users(c, users)
    assert len(serving) == 30 and set(serving) <= set(range(6))
    for placement in (pasopt.place_cup(c, users), pasopt.place_upcs(c, users), pasopt.place_rpcs(c, users, 3)):
        assert pasopt.is_feasible(c, placement)
        assert sum(len(g) for g in placement) == 30


def test_solve_beats_cup():
    c = pasopt.SystemConfig()
    users = pasopt.generate_scenario(c, 20, 4)
    cup = pasopt.evaluate(c, users, pasopt.place_cup(c, users))["mean_rate"]
    report = pasopt.solve(c, users)
    assert report["initial_mean_rate"] == pytest.approx(cup)
    assert report["mean_rate"] > cup
    assert report["cap_violations"] == 0
    assert pasopt.is_feasible(c, report["placement"])
    # The FP objective after the auxiliary updates equals the sum rate in nats.
    for F, rate in zip(report["objective_trace"], report["rate_trace"]):
        assert F == pytest.approx(math.log(2) * 20 * rate, rel=1e-9)


def test_gradcheck():
    assert pasopt.gradcheck(7) < 1e-5


def test_benchmark_roundtrip():
    spec = {"users": [10], "waveguides": [3], "trials": 2, "schemes": ["FP", "CUP"],
            "solver": {"t_max": 2, "tau_max": 20}, "record_timing": False}
    trials, aggregates = pasopt.run_benchmark(json.dumps(spec))
    rows = list(csv.DictReader(io.StringIO(trials)))
    assert len(rows) == 4
    assert list(rows[0]) == ["scheme", "N", "K", "d_min", "trial", "rate_bits", "outer_iters", "ms"]
    agg = {r["scheme"]: float(r["mean_rate_bits"]) for r in csv.DictReader(io.StringIO(aggregates))}
    fp = [float(r["rate_bits"]) for r in rows if r["scheme"] == "FP"]
    assert agg["FP"] == pytest.approx(sum(fp) / len(fp), rel=1e-12)
    assert pasopt.run_benchmark(json.dumps(spec)) == (trials, aggregates)
    with pytest.raises(pasopt.ConfigError):
        pasopt.run_benchmark(json.dumps({"trials": 0}))


def test_selftest():
    results = pasopt.selftest(1)
    assert results and all(ok for _, ok in results)

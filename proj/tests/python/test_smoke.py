import math
import os
from pathlib import Path

import numpy as np
import pytest

import stlcfs

SCENARIOS = Path(os.environ.get("STLCFS_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def test_primitives():
    box = stlcfs.BoxObstacle([10, 5, 0], [15, 15, 15])
    assert stlcfs.signed_distance(np.array([12.5, 10, 7.5]), box) == -2.5
    assert stlcfs.signed_distance(np.array([7, 1, 5]), box) == 5.0
    assert stlcfs.smooth_max(0.0, 0.0, 0.1) == pytest.approx(0.05)
    c_mu, c_rho, c_0 = stlcfs.smooth_max_coeffs(0.3, -0.1, 0.1)
    assert c_mu + c_rho == pytest.approx(1.0, abs=1e-12)
    g = stlcfs.Goal()
    g.center = [1, 0, 0]
    assert stlcfs.rho_exact(np.zeros(3), g) == pytest.approx(g.epsilon - 1.0)


def test_scenario_load_and_errors(tmp_path):
    s = stlcfs.load_scenario(SCENARIOS / "paper_urban.json")
    assert s.T == 30
    assert len(s.goals) == 3 and len(s.obstacles) == 3
    assert s.validate() == []
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValueError):
        stlcfs.load_scenario(bad)


def test_plan_small_scenario(tmp_path):
    s = stlcfs.Scenario()
    s.T = 15
    s.x_init = [0, 0, 5]
    g = stlcfs.Goal()
    g.center = [8, 3, 5]
    g.tau_start, g.tau_end = 6, 12
    s.goals = [g]
    seen = []
    r = stlcfs.plan(s, on_iteration=seen.append)
    assert r.status == "converged"
    assert r.report["pass"]
    assert len(seen) == len(r.iterations)
    pos = r.trajectory.positions
    assert pos.shape == (15, 3)
    assert min(np.linalg.norm(pos[5:12] - g.center, axis=1)) <= g.epsilon + 1e-6

    path = tmp_path / "trajectory.csv"
    stlcfs.write_trajectory_csv(r.trajectory, path)
    back = stlcfs.read_trajectory_csv(path)
    assert np.array_equal(back.positions, pos)
    assert stlcfs.verify(s, back)["pass"]


def test_verify_flags_collision():
    s = stlcfs.Scenario()
    s.T = 5
    s.x_init = [12, 10, 5]
    s.obstacles = [stlcfs.BoxObstacle([10, 5, 0], [15, 15, 15])]
    traj = stlcfs.propagate(np.array(s.x_init), np.zeros(3), np.zeros((4, 3)), 1.0)
    rep = stlcfs.verify(s, traj)
    assert not rep["pass"]
    col = next(c for c in rep["checks"] if c["name"] == "collision")
    assert col["margin"] == -2.0 and col["obstacle"] == 1
    assert math.isfinite(col["margin"])

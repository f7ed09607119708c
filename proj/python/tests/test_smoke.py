"""Smoke tests for the Python bindings.

Small grids only; each test should finish in seconds.
"""

import math

import numpy as np
import pytest

import fermilt as fl


@pytest.fixture(scope="module")
def grid():
    return fl.Grid.make(16, 16.0)


def test_grid_properties(grid):
    assert grid.n == 16
    assert grid.L == pytest.approx(16.0)
    assert grid.spacing == pytest.approx(1.0)


def test_grid_validation():
    with pytest.raises(fl.ConfigError):
        fl.Grid.make(7, 16.0)


def test_default_init_normalized(grid):
    state = fl.default_init(grid, 2)
    assert state.count == 2
    rho = fl.density(state)
    assert rho.shape == (16, 16, 16)
    cell = grid.spacing ** 3
    assert rho.sum() * cell == pytest.approx(2.0, rel=1e-10)
    w0 = state.orbital(0)
    assert w0.shape == (16, 16, 16)
    assert np.vdot(w0, w0).real * cell == pytest.approx(1.0, rel=1e-10)


def test_energy_and_quotient(grid):
    state = fl.default_init(grid, 1)
    e = fl.energy(state, 1.0, 1.0)
    assert e["total"] == pytest.approx(e["kinetic"] - e["interaction"], rel=1e-12)
    q = fl.quotient(state)
    assert q["quotient"] == pytest.approx(
        q["massless_kinetic"] / q["lp_interaction"], rel=1e-12
    )
    # any trial state lies above the one-body constant's known range
    assert q["quotient"] > 2.0


def test_minimize_energy(grid):
    cfg = fl.MinimizeConfig()
    cfg.max_iters = 2000
    out = fl.minimize_energy(fl.default_init(grid, 1), 1.35, 1.0, cfg)
    assert out["converged"]
    assert out["objective"] < 0.0
    assert out["multipliers"][0] < 0.0
    assert max(out["el_residuals"]) < 1e-4


def test_minimize_quotient_determinism(grid):
    cfg = fl.MinimizeConfig()
    cfg.max_iters = 1500
    a = fl.minimize_quotient(fl.default_init(grid, 1), cfg)
    b = fl.minimize_quotient(fl.default_init(grid, 1), cfg)
    assert a["objective"] == b["objective"]
    assert a["iterations"] == b["iterations"]
    assert a["objective"] < 3.03


def test_collapse_guard(grid):
    cfg = fl.MinimizeConfig()
    cfg.max_iters = 4000
    with pytest.raises(fl.DivergingObjective):
        fl.minimize_energy(fl.default_init(grid, 1), 8.0, 0.05, cfg)


def test_checkpoint_roundtrip(tmp_path, grid):
    state = fl.perturbed_init(grid, 2, 7)
    path = str(tmp_path / "state.fvf")
    fl.write_checkpoint(path, state)
    back = fl.read_checkpoint(path)
    assert back.count == 2
    for j in range(2):
        assert np.array_equal(back.orbital(j), state.orbital(j))


def test_estimate_constant_smoke(grid):
    cfg = fl.MinimizeConfig()
    cfg.max_iters = 1500
    d = fl.estimate_constant(1, grid, cfg, starts=2)
    assert d["converged"]
    assert 2.0 < d["value"] < 3.03
    assert d["spread"] < 1e-3
    ds = fl.estimate_dstar([d["optimizer"]])
    assert ds["value"] > 1.0


def test_binding_smoke():
    g = fl.Grid.make(16, 16.0)
    cfg = fl.MinimizeConfig()
    cfg.max_iters = 3000
    b = fl.binding_check(1.35, 1.0, g, cfg)
    assert b["converged"]
    assert b["E2"] < b["E1"] < 0.0
    assert b["margin"] == pytest.approx(2 * b["E1"] - b["E2"], abs=1e-12)

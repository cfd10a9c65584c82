import numpy as np
import pytest
from scipy import stats

from oracles import chi_square_uniform
from popbench.errors import InfeasiblePlacement
from popbench.stimgen import jittered_grid, place_target


def test_impossible_margin():
    rng = np.random.default_rng(0)
    with pytest.raises(InfeasiblePlacement):
        place_target(rng, (200, 100), 50.0)  # margin == half the short side
    with pytest.raises(InfeasiblePlacement):
        place_target(rng, (200, 100), -1.0)


def test_placement_deterministic():
    a = place_target(np.random.default_rng(7), (640, 480), 20.0)
    b = place_target(np.random.default_rng(7), (640, 480), 20.0)
    assert a == b


def test_placement_within_bounds():
    rng = np.random.default_rng(3)
    for _ in range(500):
        x, y = place_target(rng, (320, 240), 30.0)
        assert 30.0 <= x <= 290.0
        assert 30.0 <= y <= 210.0


def test_placement_uniformity_chi_square():
    # 10^4 draws binned 4x4 against the chi-square critical value at alpha=0.01
    rng = np.random.default_rng(2024)
    margin, w, h = 40.0, 640, 480
    points = [place_target(rng, (w, h), margin) for _ in range(10_000)]
    stat, dof = chi_square_uniform(points, ((margin, w - margin), (margin, h - margin)))
    critical = stats.chi2.ppf(0.99, dof)
    assert stat < critical, f"chi2={stat:.1f} exceeds critical {critical:.1f}"


def test_jittered_grid_shape_and_bounds():
    rng = np.random.default_rng(1)
    pts = jittered_grid(rng, (1280, 1024), ring=False)
    assert len(pts) == 12 * 9
    cell_w, cell_h = 1280 / 12, 1024 / 9
    for x, y in pts:
        assert -0.15 * cell_w <= x <= 1280 + 0.15 * cell_w
        assert -0.15 * cell_h <= y <= 1024 + 0.15 * cell_h


def test_jittered_grid_ring_covers_borders():
    rng = np.random.default_rng(2)
    pts = jittered_grid(rng, (1280, 1024))
    assert len(pts) == 14 * 11
    assert min(x for x, _ in pts) < 0  # texture continues past the canvas edge
    assert max(x for x, _ in pts) > 1280

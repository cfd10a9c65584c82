"""Spatial layout: uniform target placement and jittered distractor grids."""

from __future__ import annotations

import numpy as np

from ..errors import InfeasiblePlacement

GRID_COLS = 12
GRID_ROWS = 9
JITTER_FRAC = 0.15


def place_target(
    rng: np.random.Generator,
    canvas_px: tuple[int, int],
    margin_px: float,
) -> tuple[float, float]:
    """Uniform draw over the canvas minus a border zone of ``margin_px``.

    Randomized placement keeps targets decorrelated from any fixed center
    prior, which is what makes center-bias checks meaningful.
    """
    w, h = canvas_px
    if margin_px < 0:
        raise InfeasiblePlacement(f"margin must be >= 0, got {margin_px}")
    if 2 * margin_px >= w or 2 * margin_px >= h:
        raise InfeasiblePlacement(
            f"margin {margin_px} px leaves no feasible region on a {w}x{h} canvas"
        )
    x = rng.uniform(margin_px, w - margin_px)
    y = rng.uniform(margin_px, h - margin_px)
    return float(x), float(y)


def jittered_grid(
    rng: np.random.Generator,
    canvas_px: tuple[int, int],
    cols: int = GRID_COLS,
    rows: int = GRID_ROWS,
    jitter_frac: float = JITTER_FRAC,
    ring: bool = True,
) -> list[tuple[float, float]]:
    """Cell-centered positions with per-cell uniform jitter, row-major order.

    With ``ring`` the grid gains one extra cell on every side, so the element
    texture runs off the canvas edges instead of leaving an empty frame
    (an empty frame would itself pop out).
    """
    w, h = canvas_px
    cell_w = w / cols
    cell_h = h / rows
    lo, col_hi, row_hi = (-1, cols + 1, rows + 1) if ring else (0, cols, rows)
    points = []
    for r in range(lo, row_hi):
        for c in range(lo, col_hi):
            jx = rng.uniform(-jitter_frac, jitter_frac) * cell_w
            jy = rng.uniform(-jitter_frac, jitter_frac) * cell_h
            x = (c + 0.5) * cell_w + jx
            y = (r + 0.5) * cell_h + jy
            points.append((float(x), float(y)))
    return points


def grid_pitch(
    canvas_px: tuple[int, int],
    cols: int = GRID_COLS,
    rows: int = GRID_ROWS,
) -> float:
    """Mean center-to-center spacing of the distractor grid."""
    w, h = canvas_px
    return (w / cols + h / rows) / 2.0

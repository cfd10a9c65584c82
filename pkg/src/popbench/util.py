"""Small shared helpers: stable seeding and grid resampling."""

from __future__ import annotations

import hashlib

import numpy as np
from PIL import Image


def stable_seed(*parts) -> int:
    """Derive a 64-bit seed from arbitrary parts, stable across runs and platforms.

    Used to give every work unit (stimulus, metric draw, ...) its own RNG
    stream so that results do not depend on generation order.
    """
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def resize_bilinear(grid: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Resize a 2-D float field to ``dims = (width, height)`` bilinearly."""
    w, h = dims
    if grid.shape == (h, w):
        return np.asarray(grid, dtype=np.float64)
    img = Image.fromarray(np.asarray(grid, dtype=np.float32), mode="F")
    out = img.resize((w, h), Image.Resampling.BILINEAR)
    return np.asarray(out, dtype=np.float64)


def minmax_normalize(grid: np.ndarray, flat_eps: float = 1e-12) -> np.ndarray:
    """Map a field onto [0, 1]; near-constant fields collapse to all zeros."""
    grid = np.asarray(grid, dtype=np.float64)
    lo = float(grid.min())
    hi = float(grid.max())
    span = hi - lo
    if span <= flat_eps * max(abs(hi), abs(lo), 1.0):
        return np.zeros_like(grid)
    return (grid - lo) / span

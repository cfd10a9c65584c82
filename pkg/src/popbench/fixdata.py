"""Eye-tracking fixation ingestion and density map construction.

Fixation files are CSV with the header
``image_id,participant_id,index,x,y,duration_ms``; one row per fixation,
coordinates in pixels of the stimulus the fixations were recorded on.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import (
    DimensionMismatch,
    EmptyFixationMap,
    NonMonotoneIndex,
    ParseError,
)

CSV_HEADER = ["image_id", "participant_id", "index", "x", "y", "duration_ms"]


class BoundsPolicy(str, Enum):
    DROP = "drop"    # exclude out-of-bounds fixations, with a warning
    CLAMP = "clamp"  # clamp coordinates onto the canvas


class Normalization(str, Enum):
    SUM_TO_ONE = "sum"
    MAX_TO_ONE = "max"


class DroppedFixationWarning(UserWarning):
    """An out-of-bounds fixation was excluded under the drop policy."""


@dataclass(frozen=True)
class FixationRecord:
    image_id: str
    participant_id: str
    index: int
    x: float
    y: float
    duration_ms: float = 0.0


@dataclass
class ScanPath:
    """Ordered fixations of one participant on one image."""

    image_id: str
    participant_id: str
    fixations: list[FixationRecord] = field(default_factory=list)


@dataclass(frozen=True)
class DensityParams:
    sigma_deg: float = 1.0
    px_per_deg: float = 40.0
    normalization: Normalization = Normalization.SUM_TO_ONE

    @property
    def sigma_px(self) -> float:
        return self.sigma_deg * self.px_per_deg


def load_fixations(
    path: str | Path,
    dims: tuple[int, int] | None = None,
    policy: BoundsPolicy = BoundsPolicy.DROP,
) -> list[ScanPath]:
    """Parse a fixation CSV into scanpaths sorted by fixation index.

    Negative coordinates are always out of bounds; the upper bound is only
    enforced when ``dims`` is given. Under the drop policy offending rows
    are excluded with a :class:`DroppedFixationWarning` each.
    """
    records: dict[tuple[str, str], list[FixationRecord]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if [h.strip() for h in header] != CSV_HEADER:
            raise ParseError(
                f"{path}: line 1: expected header {','.join(CSV_HEADER)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ParseError(f"{path}: line {lineno}: expected 6 fields, got {len(row)}")
            try:
                rec = FixationRecord(
                    image_id=row[0].strip(),
                    participant_id=row[1].strip(),
                    index=int(row[2]),
                    x=float(row[3]),
                    y=float(row[4]),
                    duration_ms=float(row[5]),
                )
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
            if rec.index < 1:
                raise ParseError(f"{path}: line {lineno}: index must be >= 1")
            if rec.duration_ms < 0:
                raise ParseError(f"{path}: line {lineno}: negative duration")
            rec = _apply_bounds(rec, dims, policy, lineno)
            if rec is None:
                continue
            records.setdefault((rec.image_id, rec.participant_id), []).append(rec)

    scanpaths = []
    for (image_id, participant_id), fixes in sorted(records.items()):
        fixes.sort(key=lambda r: r.index)
        for a, b in zip(fixes, fixes[1:]):
            if b.index <= a.index:
                raise NonMonotoneIndex(
                    f"{image_id}/{participant_id}: duplicate or non-increasing "
                    f"fixation index {b.index}"
                )
        scanpaths.append(ScanPath(image_id, participant_id, fixes))
    return scanpaths


def _apply_bounds(rec, dims, policy, lineno):
    w = dims[0] if dims else None
    h = dims[1] if dims else None
    oob = rec.x < 0 or rec.y < 0
    if w is not None:
        oob = oob or rec.x >= w or rec.y >= h
    if not oob:
        return rec
    if policy is BoundsPolicy.DROP:
        warnings.warn(
            f"line {lineno}: fixation ({rec.x}, {rec.y}) out of bounds, dropped",
            DroppedFixationWarning,
            stacklevel=2,
        )
        return None
    x = min(max(rec.x, 0.0), (w - 1) if w else rec.x)
    y = min(max(rec.y, 0.0), (h - 1) if h else rec.y)
    return FixationRecord(rec.image_id, rec.participant_id, rec.index, x, y, rec.duration_ms)


def fixation_map(scanpaths: list[ScanPath], dims: tuple[int, int]) -> np.ndarray:
    """Pool fixations of all scanpaths into an integer count grid."""
    w, h = dims
    grid = np.zeros((h, w), dtype=np.int32)
    for sp in scanpaths:
        for rec in sp.fixations:
            x, y = int(round(rec.x)), int(round(rec.y))
            if not (0 <= x < w and 0 <= y < h):
                raise DimensionMismatch(
                    f"fixation ({rec.x}, {rec.y}) outside {w}x{h} grid "
                    f"for image {rec.image_id}"
                )
            grid[y, x] += 1
    return grid


def density_map(fmap: np.ndarray, params: DensityParams = DensityParams()) -> np.ndarray:
    """Gaussian-smoothed fixation density.

    The kernel is truncated at 3 sigma; the mass each fixation loses off
    the canvas edge is restored by per-source renormalization, so the sum
    normalization stays exact for border fixations too.
    """
    fmap = np.asarray(fmap, dtype=np.float64)
    total = fmap.sum()
    if total <= 0 and params.normalization is Normalization.SUM_TO_ONE:
        raise EmptyFixationMap("sum normalization needs at least one fixation")
    if total <= 0:
        return np.zeros_like(fmap)
    inside = ndimage.gaussian_filter(
        np.ones_like(fmap), params.sigma_px, mode="constant", truncate=3.0
    )
    dens = ndimage.gaussian_filter(
        fmap / inside, params.sigma_px, mode="constant", truncate=3.0
    )
    if params.normalization is Normalization.SUM_TO_ONE:
        return dens / dens.sum()
    return dens / dens.max()


def split_by_gaze_index(
    scanpaths: list[ScanPath], max_index: int
) -> list[list[FixationRecord]]:
    """Pool fixations by their within-trial order: result[k-1] holds index k."""
    if max_index < 1:
        raise ValueError(f"max_index must be >= 1, got {max_index}")
    groups: list[list[FixationRecord]] = [[] for _ in range(max_index)]
    for sp in scanpaths:
        for rec in sp.fixations:
            if rec.index <= max_index:
                groups[rec.index - 1].append(rec)
    return groups

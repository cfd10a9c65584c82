"""Mapping from the discrete contrast level psi onto per-feature deltas.

Each feature kind owns a linear ramp from zero (or ratio 1) at psi -> 0 up to
a documented maximum at the top of the grid, so the target-distractor
difference spans subtle to obvious and is auditable. The grid is 1..7 by
default but can be re-sampled finer (``psi_max``) for larger datasets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import UnknownPsi
from .blocks import BlockId

DEFAULT_PSI_MAX = 7
HARD_FRACTION = 4 / 7  # psi 1..4 of 7 are the hard levels


class FeatureKind(str, Enum):
    ORIENTATION_DEG = "OrientationDeg"
    BRIGHTNESS_LEVEL = "BrightnessLevel"
    COLOR_DISTANCE = "ColorDistance"
    SIZE_RATIO = "SizeRatio"
    SPACING_RATIO = "SpacingRatio"
    ANGLE_DEG = "AngleDeg"
    LENGTH_RATIO = "LengthRatio"
    CONTINUITY_GAP_RATIO = "ContinuityGapRatio"
    ROUGHNESS_AMPLITUDE = "RoughnessAmplitude"


# (low, high) endpoints of the linear ramp, in the kind's unit:
# degrees for orientations/angles, 8-bit levels for brightness, hue-angle
# degrees for color, dimensionless ratios, amplitude as fraction of the
# dynamic range for roughness.
KIND_RANGE: dict[FeatureKind, tuple[float, float]] = {
    FeatureKind.ORIENTATION_DEG: (0.0, 90.0),
    FeatureKind.BRIGHTNESS_LEVEL: (0.0, 255.0),
    FeatureKind.COLOR_DISTANCE: (0.0, 180.0),
    FeatureKind.SIZE_RATIO: (1.0, 2.5),
    FeatureKind.SPACING_RATIO: (1.0, 3.0),
    FeatureKind.ANGLE_DEG: (0.0, 90.0),
    FeatureKind.LENGTH_RATIO: (1.0, 3.0),
    FeatureKind.CONTINUITY_GAP_RATIO: (1.0, 3.0),
    FeatureKind.ROUGHNESS_AMPLITUDE: (0.0, 0.5),
}

# Defining feature of every (block, subtype). Conjunction subtypes (6.3,
# 6.4) are keyed by color; their second feature reuses the matching kind
# internally.
FEATURE_KINDS: dict[tuple[int, int], FeatureKind] = {
    (1, 1): FeatureKind.ANGLE_DEG,
    (2, 1): FeatureKind.ORIENTATION_DEG,
    (2, 2): FeatureKind.ORIENTATION_DEG,
    (3, 1): FeatureKind.LENGTH_RATIO,
    (4, 1): FeatureKind.CONTINUITY_GAP_RATIO,
    (5, 1): FeatureKind.SPACING_RATIO,
    (5, 2): FeatureKind.SPACING_RATIO,
    (6, 1): FeatureKind.COLOR_DISTANCE,
    (6, 2): FeatureKind.ORIENTATION_DEG,
    (6, 3): FeatureKind.COLOR_DISTANCE,
    (6, 4): FeatureKind.COLOR_DISTANCE,
    (7, 1): FeatureKind.LENGTH_RATIO,
    (7, 2): FeatureKind.LENGTH_RATIO,
    (8, 1): FeatureKind.ROUGHNESS_AMPLITUDE,
    (8, 2): FeatureKind.ROUGHNESS_AMPLITUDE,
    (9, 1): FeatureKind.COLOR_DISTANCE,
    (9, 2): FeatureKind.COLOR_DISTANCE,
    (9, 3): FeatureKind.COLOR_DISTANCE,
    (9, 4): FeatureKind.COLOR_DISTANCE,
    (10, 1): FeatureKind.BRIGHTNESS_LEVEL,
    (10, 2): FeatureKind.BRIGHTNESS_LEVEL,
    (11, 1): FeatureKind.ORIENTATION_DEG,
    (12, 1): FeatureKind.SIZE_RATIO,
    (13, 1): FeatureKind.ORIENTATION_DEG,
    (13, 2): FeatureKind.ORIENTATION_DEG,
    (13, 3): FeatureKind.ORIENTATION_DEG,
    (14, 1): FeatureKind.ORIENTATION_DEG,
    (14, 2): FeatureKind.ORIENTATION_DEG,
    (14, 3): FeatureKind.ORIENTATION_DEG,
    (14, 4): FeatureKind.ORIENTATION_DEG,
    (15, 1): FeatureKind.ORIENTATION_DEG,
    (15, 2): FeatureKind.ORIENTATION_DEG,
    (15, 3): FeatureKind.ORIENTATION_DEG,
}


@dataclass(frozen=True)
class FeatureDelta:
    """Realized target-vs-distractor difference at one contrast level."""

    kind: FeatureKind
    value: float


def contrast_fraction(psi: int, psi_max: int = DEFAULT_PSI_MAX) -> float:
    """psi (1..psi_max) -> fraction of the feature range, in (0, 1]."""
    if psi_max < 1:
        raise UnknownPsi(f"psi_max must be >= 1, got {psi_max}")
    if not 1 <= psi <= psi_max:
        raise UnknownPsi(f"psi must be in 1..{psi_max}, got {psi}")
    return psi / psi_max


def contrast_value(
    block: BlockId | int,
    subtype: int,
    psi: int,
    psi_max: int = DEFAULT_PSI_MAX,
) -> FeatureDelta:
    """Feature difference realized at contrast level psi.

    Strictly increasing in psi; psi == psi_max lands on the kind's
    documented range endpoint.
    """
    block = block if isinstance(block, BlockId) else BlockId(block)
    block.validate_subtype(subtype)
    frac = contrast_fraction(psi, psi_max)
    kind = FEATURE_KINDS[(block.id, subtype)]
    lo, hi = KIND_RANGE[kind]
    return FeatureDelta(kind=kind, value=lo + frac * (hi - lo))


def is_hard(psi: int, psi_max: int = DEFAULT_PSI_MAX) -> bool:
    """Difficulty split: the lower 4/7 of the grid counts as hard."""
    if not 1 <= psi <= psi_max:
        raise UnknownPsi(f"psi must be in 1..{psi_max}, got {psi}")
    return psi / psi_max <= HARD_FRACTION + 1e-12

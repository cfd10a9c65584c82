"""Procedural stimulus rendering.

Every stimulus is a pure function of its spec: the seed drives one RNG and
all random draws (target placement, grid jitter, per-element jitter) happen
in a fixed order that does not depend on the contrast level, so layouts are
comparable across psi for a shared seed.
"""

from __future__ import annotations

import colorsys
import math
from collections.abc import Iterator
from dataclasses import dataclass, field, asdict

import numpy as np
from PIL import Image, ImageDraw
from scipy import ndimage

from ..errors import InfeasiblePlacement, PopbenchError, RenderOverflow, UnknownPsi
from ..imageops import dilate_mask
from ..util import stable_seed
from .blocks import BlockId, Task, all_subtypes
from .contrast import (
    DEFAULT_PSI_MAX,
    FeatureDelta,
    FeatureKind,
    KIND_RANGE,
    contrast_fraction,
    contrast_value,
    is_hard,
)
from .layout import GRID_COLS, GRID_ROWS, grid_pitch, jittered_grid, place_target
from .render import draw_bar, draw_disk, draw_glyph, draw_ring, draw_tick_ring, stroke_path

# geometry defaults, in degrees of visual angle
BAR_LEN_DEG = 1.0
BAR_WIDTH_DEG = 0.25
# orientation-singleton bars are thinner: a higher aspect ratio keeps the
# spectral orientation tuning graded over the whole contrast sweep
SEARCH_BAR_WIDTH_DEG = 0.15
SEG_BAR_LEN_DEG = 0.6
SEG_BAR_WIDTH_DEG = 0.2
DISK_DIAM_DEG = 0.8
GROUP_DISK_DIAM_DEG = 0.5
RING_STROKE_DEG = 0.1
GLYPH_SIZE_DEG = 1.1
GLYPH_STROKE_DEG = 0.15
AOI_DILATE_DEG = 0.5
CORNER_ARM_DEG = 4.0
CORNER_STROKE_DEG = 0.18
CONTOUR_RADIUS_DEG = 6.0
GROUP_RADIUS_DEG = 3.0
ROUGH_PATCH_RADIUS_DEG = 1.0
ROUGH_NOISE_SIGMA_DEG = 0.05
BOUNDARY_STROKE_DEG = 0.5

BG_GRAY = (127, 127, 127)
ELEMENT_DARK = (40, 40, 40)
MAX_AOI_FRACTION = 0.25


@dataclass(frozen=True)
class StimulusSpec:
    """Full parametrization of one synthetic image."""

    block: int
    subtype: int = 1
    psi: int = 1
    canvas_px: tuple[int, int] = (1280, 1024)
    px_per_deg: float = 40.0
    seed: int = 0
    target_xy: tuple[float, float] | None = None  # None -> randomized uniform
    psi_max: int = DEFAULT_PSI_MAX

    def validate(self) -> None:
        block = BlockId(self.block)
        block.validate_subtype(self.subtype)
        if not 1 <= self.psi <= self.psi_max:
            raise UnknownPsi(f"psi must be in 1..{self.psi_max}, got {self.psi}")
        w, h = self.canvas_px
        if w <= 0 or h <= 0:
            raise RenderOverflow(f"canvas must be positive, got {self.canvas_px}")
        if self.px_per_deg <= 0:
            raise RenderOverflow(f"px_per_deg must be > 0, got {self.px_per_deg}")

    @property
    def block_id(self) -> BlockId:
        return BlockId(self.block)

    @property
    def task(self) -> Task:
        return self.block_id.task

    @property
    def difficulty(self) -> str:
        return "Hard" if is_hard(self.psi, self.psi_max) else "Easy"

    @property
    def image_id(self) -> str:
        return f"{self.block}_{self.subtype}_{self.psi}"


@dataclass
class ElementRecord:
    """Audit record of one rendered element."""

    x: float
    y: float
    orientation_deg: float
    size_px: float
    color: tuple[int, int, int]
    shape: str
    is_target: bool
    feature_value: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["color"] = list(self.color)
        return d


@dataclass
class Stimulus:
    spec: StimulusSpec
    image: np.ndarray          # (h, w, 3) uint8
    aoi_mask: np.ndarray       # (h, w) bool
    target_center: tuple[float, float]
    element_log: list[ElementRecord] = field(default_factory=list)

    @property
    def image_id(self) -> str:
        return self.spec.image_id


@dataclass
class GeneratorConfig:
    blocks: list[int] | None = None
    psi_levels: list[int] = field(default_factory=lambda: list(range(1, 8)))
    psi_max: int = DEFAULT_PSI_MAX
    master_seed: int = 0
    canvas_px: tuple[int, int] = (1280, 1024)
    px_per_deg: float = 40.0


# --- scene scaffolding -------------------------------------------------------

@dataclass
class _Ctx:
    spec: StimulusSpec
    rng: np.random.Generator
    fraction: float
    delta: FeatureDelta

    def px(self, deg: float) -> float:
        return deg * self.spec.px_per_deg


class _Canvas:
    def __init__(self, spec: StimulusSpec, bg: tuple[int, int, int]):
        self.img = Image.new("RGB", spec.canvas_px, bg)
        self.mask = Image.new("L", spec.canvas_px, 0)
        self.draw = ImageDraw.Draw(self.img)
        self.mask_draw = ImageDraw.Draw(self.mask)

    @property
    def target_draws(self) -> list:
        return [self.draw, self.mask_draw]

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.img), np.asarray(self.mask) > 0


def _resolve_target(ctx: _Ctx, margin_px: float) -> tuple[float, float]:
    if ctx.spec.target_xy is not None:
        return ctx.spec.target_xy
    return place_target(ctx.rng, ctx.spec.canvas_px, margin_px)


def _field_layout(
    ctx: _Ctx, margin_px: float, max_extent_px: float
) -> tuple[tuple[float, float], list[tuple[float, float]]]:
    """Target position plus the jittered distractor grid.

    The target replaces the grid cell nearest to a uniformly placed anchor,
    so the texture stays regular; a cleared hole around a free-floating
    target would itself pop out at every contrast level.
    """
    w, h = ctx.spec.canvas_px
    cell = min(w / GRID_COLS, h / GRID_ROWS)
    if max_extent_px > cell:
        raise RenderOverflow(
            f"elements of {max_extent_px:.0f} px do not fit {cell:.0f} px grid cells "
            f"on a {w}x{h} canvas"
        )
    fixed = ctx.spec.target_xy
    anchor = fixed if fixed is not None else place_target(ctx.rng, ctx.spec.canvas_px, margin_px)
    points = jittered_grid(ctx.rng, ctx.spec.canvas_px)
    candidates = [
        i for i, (x, y) in enumerate(points)
        if fixed is not None
        or (margin_px <= x <= w - margin_px and margin_px <= y <= h - margin_px)
    ]
    if not candidates:
        raise RenderOverflow(
            f"margin {margin_px:.0f} px leaves no grid cell for the target "
            f"on a {w}x{h} canvas"
        )
    nearest = min(candidates,
                  key=lambda i: math.hypot(points[i][0] - anchor[0],
                                           points[i][1] - anchor[1]))
    target = fixed if fixed is not None else points[nearest]
    distractors = [p for i, p in enumerate(points) if i != nearest]
    return target, distractors


def _hue_rgb(hue_deg: float, s: float = 0.75, v: float = 0.85) -> tuple[int, int, int]:
    r, g, b = colorsys.hsv_to_rgb((hue_deg % 360.0) / 360.0, s, v)
    return (round(r * 255), round(g * 255), round(b * 255))


_COLOR_SAT = 0.75
_COLOR_VALUE = 0.85
_LUMA_RAMP = 0.30  # max luminance offset realized alongside a full hue rotation


def _unit_luma(hue_deg: float) -> float:
    r, g, b = colorsys.hsv_to_rgb((hue_deg % 360.0) / 360.0, _COLOR_SAT, 1.0)
    return 0.299 * r + 0.587 * g + 0.114 * b


def _luma_ramp(base_hue: float) -> tuple[float, float]:
    """(sign, slope) of the luminance ramp feasible for this base hue.

    Display hues at fixed saturation are far from isoluminant, so a pure
    hue rotation gives luminance-only observers a non-monotone contrast.
    The odd color therefore also ramps its luminance linearly with the hue
    distance; the direction is whichever side has headroom on the value
    channel for the whole sweep.
    """
    base_l = _COLOR_VALUE * _unit_luma(base_hue)
    fs = [k / 64.0 for k in range(1, 65)]
    up = min((_unit_luma(base_hue + 180.0 * f) - base_l) / f for f in fs)
    down = base_l - 0.05
    if up >= down:
        return 1.0, min(_LUMA_RAMP, max(up * 0.98, 0.0))
    return -1.0, min(_LUMA_RAMP, max(down * 0.98, 0.0))


def _delta_color(base_hue: float, fraction: float) -> tuple[tuple[int, int, int], float]:
    """(rgb, hue) of the contrast color at this fraction of the full sweep."""
    sign, slope = _luma_ramp(base_hue)
    hue = (base_hue + 180.0 * fraction) % 360.0
    luma = _COLOR_VALUE * _unit_luma(base_hue) + sign * slope * fraction
    value = min(1.0, max(0.05, luma / _unit_luma(hue)))
    r, g, b = colorsys.hsv_to_rgb(hue / 360.0, _COLOR_SAT, value)
    return (round(r * 255), round(g * 255), round(b * 255)), hue


def _record(x, y, orient, size, color, shape, is_target, feature_value) -> ElementRecord:
    return ElementRecord(
        x=float(x), y=float(y), orientation_deg=float(orient % 360.0),
        size_px=float(size), color=tuple(int(c) for c in color),
        shape=shape, is_target=bool(is_target), feature_value=float(feature_value),
    )


# --- free-viewing blocks -----------------------------------------------------

def _render_corner(ctx: _Ctx):
    """A long contour with a single bend; the vertex is the salient structure."""
    arm = ctx.px(CORNER_ARM_DEG)
    stroke = ctx.px(CORNER_STROKE_DEG)
    vertex = _resolve_target(ctx, arm + ctx.px(0.5))
    phi = ctx.rng.uniform(0.0, 360.0)
    bend = ctx.delta.value  # deviation from a straight line, degrees
    d1, d2 = phi, phi + 180.0 - bend
    p1 = (vertex[0] + arm * math.cos(math.radians(d1)),
          vertex[1] + arm * math.sin(math.radians(d1)))
    p2 = (vertex[0] + arm * math.cos(math.radians(d2)),
          vertex[1] + arm * math.sin(math.radians(d2)))
    canvas = _Canvas(ctx.spec, BG_GRAY)
    stroke_path(canvas.draw, [p1, vertex, p2], stroke, ELEMENT_DARK)
    # footprint: the stretch of contour adjacent to the vertex
    short = ctx.px(1.2)
    q1 = (vertex[0] + short * math.cos(math.radians(d1)),
          vertex[1] + short * math.sin(math.radians(d1)))
    q2 = (vertex[0] + short * math.cos(math.radians(d2)),
          vertex[1] + short * math.sin(math.radians(d2)))
    stroke_path(canvas.mask_draw, [q1, vertex, q2], stroke, ELEMENT_DARK)
    elements = [
        _record(*p1, d1, arm, ELEMENT_DARK, "contour_arm", False, 0.0),
        _record(*p2, d2, arm, ELEMENT_DARK, "contour_arm", False, 0.0),
        _record(*vertex, phi, stroke, ELEMENT_DARK, "corner", True, bend),
    ]
    img, fp = canvas.arrays()
    return img, fp, vertex, elements


def _render_segmentation(ctx: _Ctx):
    """Two bar-texture regions; the boundary between them is the structure.

    Block 2 varies bar orientation across the boundary, block 3 varies bar
    length. Subtype 2 of block 2 uses a horizontal boundary and oblique base.
    """
    spec = ctx.spec
    w, h = spec.canvas_px
    by_length = spec.block == 3
    horizontal = spec.block == 2 and spec.subtype == 2
    base_orient = 45.0 if horizontal else 90.0
    if horizontal:
        cut = ctx.rng.uniform(0.35 * h, 0.65 * h)
        center = (w / 2.0, cut)
    else:
        cut = ctx.rng.uniform(0.35 * w, 0.65 * w)
        center = (cut, h / 2.0)
    points = jittered_grid(ctx.rng, spec.canvas_px)

    length = ctx.px(SEG_BAR_LEN_DEG if by_length else BAR_LEN_DEG)
    width = ctx.px(SEG_BAR_WIDTH_DEG if by_length else BAR_WIDTH_DEG)
    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []
    for (x, y) in points:
        odd = (y > cut) if horizontal else (x > cut)
        if by_length:
            ln = length * (ctx.delta.value if odd else 1.0)
            orient = base_orient
            feature = ln
        else:
            ln = length
            orient = base_orient + (ctx.delta.value if odd else 0.0)
            feature = orient % 180.0
        draw_bar(canvas.draw, x, y, ln, width, orient, ELEMENT_DARK)
        elements.append(_record(x, y, orient, ln, ELEMENT_DARK, "bar", False, feature))

    stroke = ctx.px(BOUNDARY_STROKE_DEG)
    if horizontal:
        canvas.mask_draw.line([(0, cut), (w, cut)], fill=255, width=max(1, round(stroke)))
        boundary_orient = 0.0
    else:
        canvas.mask_draw.line([(cut, 0), (cut, h)], fill=255, width=max(1, round(stroke)))
        boundary_orient = 90.0
    elements.append(_record(*center, boundary_orient, stroke, ELEMENT_DARK,
                            "boundary", True, ctx.delta.value))
    img, fp = canvas.arrays()
    return img, fp, center, elements


def _render_contour(ctx: _Ctx):
    """Aligned bars along a circle inside a field of randomly oriented bars.

    The gap ratio packs the contour elements more densely than the field,
    which is what makes the path integrate perceptually.
    """
    spec = ctx.spec
    radius = ctx.px(CONTOUR_RADIUS_DEG)
    margin = radius + ctx.px(1.2)
    center = _resolve_target(ctx, margin)
    points = jittered_grid(ctx.rng, spec.canvas_px)
    pitch = grid_pitch(spec.canvas_px)

    length = ctx.px(0.9)
    width = ctx.px(0.22)
    corridor = ctx.px(1.3)
    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []
    for (x, y) in points:
        if abs(math.hypot(x - center[0], y - center[1]) - radius) < corridor:
            continue
        orient = ctx.rng.uniform(0.0, 180.0)
        draw_bar(canvas.draw, x, y, length, width, orient, ELEMENT_DARK)
        elements.append(_record(x, y, orient, length, ELEMENT_DARK, "bar", False, pitch))

    spacing_target = pitch / ctx.delta.value
    n = max(8, round(2 * math.pi * radius / spacing_target))
    spacing = 2 * math.pi * radius / n
    phi0 = ctx.rng.uniform(0.0, 360.0)
    target_pos = None
    for k in range(n):
        a = math.radians(phi0 + k * 360.0 / n)
        x = center[0] + radius * math.cos(a)
        y = center[1] + radius * math.sin(a)
        orient = (phi0 + k * 360.0 / n + 90.0) % 180.0
        draw_bar(canvas.target_draws, x, y, length, width, orient, ELEMENT_DARK)
        elements.append(_record(x, y, orient, length, ELEMENT_DARK,
                                "contour_bar", k == 0, spacing))
        if k == 0:
            target_pos = (x, y)
    img, fp = canvas.arrays()
    return img, fp, target_pos, elements


def _render_grouping(ctx: _Ctx):
    """A compact cluster of elements inside a sparser field of the same kind."""
    spec = ctx.spec
    group_r = ctx.px(GROUP_RADIUS_DEG)
    center = _resolve_target(ctx, group_r + ctx.px(1.0))
    points = jittered_grid(ctx.rng, spec.canvas_px)
    pitch = grid_pitch(spec.canvas_px)

    bars = spec.subtype == 2
    diam = ctx.px(GROUP_DISK_DIAM_DEG)
    bar_len, bar_w = ctx.px(0.7), ctx.px(0.18)
    extent = bar_len if bars else diam
    shape = "group_bar" if bars else "group_disk"
    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []

    def _draw_element(draws, x, y):
        if bars:
            draw_bar(draws, x, y, bar_len, bar_w, 90.0, ELEMENT_DARK)
        else:
            draw_disk(draws, x, y, diam, ELEMENT_DARK)

    clearance = group_r + 0.7 * pitch
    for (x, y) in points:
        if math.hypot(x - center[0], y - center[1]) < clearance:
            continue
        _draw_element(canvas.draw, x, y)
        elements.append(_record(x, y, 90.0 if bars else 0.0, extent,
                                ELEMENT_DARK, "bar" if bars else "disk", False, pitch))

    spacing = pitch / ctx.delta.value
    reach = group_r - extent / 2.0 - 1.0
    steps = int(reach // spacing)
    for i in range(-steps, steps + 1):
        for j in range(-steps, steps + 1):
            dx, dy = i * spacing, j * spacing
            if math.hypot(dx, dy) > reach:
                continue
            x, y = center[0] + dx, center[1] + dy
            _draw_element(canvas.draw, x, y)
            elements.append(_record(x, y, 90.0 if bars else 0.0, extent,
                                    ELEMENT_DARK, shape, i == 0 and j == 0, spacing))
    # AOI: the disk region the cluster occupies
    cx, cy = center
    yy, xx = np.ogrid[: spec.canvas_px[1], : spec.canvas_px[0]]
    fp = (xx - cx) ** 2 + (yy - cy) ** 2 <= group_r**2
    img, _ = canvas.arrays()
    return img, fp, center, elements


# --- visual-search blocks ----------------------------------------------------

def _render_feature_conjunction(ctx: _Ctx):
    """Feature search (color / orientation) and two conjunction variants."""
    spec = ctx.spec
    s = spec.subtype
    frac = ctx.fraction
    hue_base = 0.0
    orient_delta = frac * (KIND_RANGE[FeatureKind.ORIENTATION_DEG][1])
    size_lo, size_hi = KIND_RANGE[FeatureKind.SIZE_RATIO]
    size_ratio = size_lo + frac * (size_hi - size_lo)
    base_rgb = _hue_rgb(hue_base)
    delta_rgb, delta_hue = _delta_color(hue_base, frac)

    diam = ctx.px(DISK_DIAM_DEG)
    bar_len, bar_w = ctx.px(BAR_LEN_DEG), ctx.px(BAR_WIDTH_DEG)
    base_orient = 90.0
    max_extent = diam * (size_ratio if s == 4 else 1.0) if s in (1, 4) else bar_len
    margin = max_extent / 2.0 + 4.0
    target, points = _field_layout(ctx, margin, max_extent)

    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []

    def _disk(draws, x, y, color, hue, scale, is_target, shape):
        d = diam * scale
        draw_disk(draws, x, y, d, color)
        elements.append(_record(x, y, 0.0, d, color, shape, is_target, hue % 360.0))

    def _bar(draws, x, y, color, hue, orient, is_target, shape):
        if s == 2:
            color = ELEMENT_DARK
        draw_bar(draws, x, y, bar_len, bar_w, orient, color)
        feature = orient % 180.0 if s == 2 else hue % 360.0
        elements.append(_record(x, y, orient, bar_len, color, shape, is_target, feature))

    if s == 1:  # color feature search
        for (x, y) in points:
            _disk(canvas.draw, x, y, base_rgb, hue_base, 1.0, False, "disk")
        _disk(canvas.target_draws, *target, delta_rgb, delta_hue, 1.0, True, "disk")
    elif s == 2:  # orientation feature search
        for (x, y) in points:
            _bar(canvas.draw, x, y, base_rgb, hue_base, base_orient, False, "bar")
        _bar(canvas.target_draws, *target, base_rgb, hue_base,
             base_orient + orient_delta, True, "bar")
    elif s == 3:  # color x orientation conjunction
        for k, (x, y) in enumerate(points):
            if k % 2 == 0:
                _bar(canvas.draw, x, y, base_rgb, hue_base,
                     base_orient + orient_delta, False, "bar")
            else:
                _bar(canvas.draw, x, y, delta_rgb, delta_hue, base_orient, False, "bar")
        _bar(canvas.target_draws, *target, delta_rgb, delta_hue,
             base_orient + orient_delta, True, "bar")
    else:  # color x size conjunction
        for k, (x, y) in enumerate(points):
            if k % 2 == 0:
                _disk(canvas.draw, x, y, base_rgb, hue_base, size_ratio, False, "disk")
            else:
                _disk(canvas.draw, x, y, delta_rgb, delta_hue, 1.0, False, "disk")
        _disk(canvas.target_draws, *target, delta_rgb, delta_hue, size_ratio, True, "disk")
    img, fp = canvas.arrays()
    return img, fp, target, elements


def _render_asymmetry(ctx: _Ctx):
    """Presence/absence search with ring-plus-tick versus plain ring."""
    spec = ctx.spec
    diam = ctx.px(DISK_DIAM_DEG)
    stroke = ctx.px(RING_STROKE_DEG)
    tick = ctx.fraction * 0.9 * diam
    outer = diam + tick  # tick sticks half out of the ring
    margin = outer / 2.0 + 4.0
    target, points = _field_layout(ctx, margin, outer)
    target_has_tick = spec.subtype == 1

    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []

    def _element(draws, x, y, with_tick, is_target):
        if with_tick:
            draw_tick_ring(draws, x, y, diam, stroke, tick, ELEMENT_DARK)
        else:
            draw_ring(draws, x, y, diam, stroke, ELEMENT_DARK)
        shape = "tick_ring" if with_tick else "ring"
        elements.append(_record(x, y, 0.0, diam, ELEMENT_DARK, shape, is_target,
                                tick if with_tick else 0.0))

    for (x, y) in points:
        _element(canvas.draw, x, y, not target_has_tick, False)
    _element(canvas.target_draws, *target, target_has_tick, True)
    img, fp = canvas.arrays()
    return img, fp, target, elements


def _render_rough_surface(ctx: _Ctx):
    """A texture-amplitude singleton: smooth patch on a rough field or the reverse."""
    spec = ctx.spec
    w, h = spec.canvas_px
    amp = ctx.delta.value  # fraction of the dynamic range
    sigma = max(0.5, ctx.px(ROUGH_NOISE_SIGMA_DEG))
    field = ctx.rng.standard_normal((h, w))
    field = ndimage.gaussian_filter(field, sigma)
    field /= max(field.std(), 1e-12)
    noise = amp * 127.5 * field

    radius = ctx.px(ROUGH_PATCH_RADIUS_DEG)
    center = _resolve_target(ctx, radius + 4.0)
    yy, xx = np.ogrid[:h, :w]
    patch = (xx - center[0]) ** 2 + (yy - center[1]) ** 2 <= radius**2

    smooth_target = spec.subtype == 1
    gray = np.full((h, w), 127.0)
    if smooth_target:
        gray += noise
        gray[patch] = 127.0
        t_rough, bg_rough = 0.0, amp
    else:
        gray[patch] += noise[patch]
        t_rough, bg_rough = amp, 0.0
    img = np.clip(np.rint(gray), 0, 255).astype(np.uint8)
    img = np.repeat(img[:, :, None], 3, axis=2)
    elements = [
        _record(*center, 0.0, 2 * radius, BG_GRAY, "patch", True, t_rough),
        _record(w / 2.0, h / 2.0, 0.0, math.hypot(w, h), BG_GRAY,
                "background", False, bg_rough),
    ]
    return img, patch, center, elements


_COLOR_SUBTYPES = {1: (0.0, None), 2: (120.0, None), 3: (240.0, None),
                   4: (30.0, (60, 60, 110))}


def _render_color_search(ctx: _Ctx):
    """A hue singleton among same-hue disks; subtype 4 adds a tinted background."""
    base_hue, bg = _COLOR_SUBTYPES[ctx.spec.subtype]
    diam = ctx.px(DISK_DIAM_DEG)
    target, points = _field_layout(ctx, diam / 2.0 + 4.0, diam)
    canvas = _Canvas(ctx.spec, bg or BG_GRAY)
    elements = []
    for (x, y) in points:
        color = _hue_rgb(base_hue)
        draw_disk(canvas.draw, x, y, diam, color)
        elements.append(_record(x, y, 0.0, diam, color, "disk", False, base_hue))
    color, t_hue = _delta_color(base_hue, ctx.fraction)
    draw_disk(canvas.target_draws, *target, diam, color)
    elements.append(_record(*target, 0.0, diam, color, "disk", True, t_hue))
    img, fp = canvas.arrays()
    return img, fp, target, elements


def _render_brightness_search(ctx: _Ctx):
    """A luminance singleton on a black field; subtype 1 brighter, 2 darker."""
    diam = ctx.px(DISK_DIAM_DEG)
    target, points = _field_layout(ctx, diam / 2.0 + 4.0, diam)
    if ctx.spec.subtype == 1:
        d_luma, t_luma = 64, 64 + ctx.fraction * 191.0
    else:
        d_luma, t_luma = 200, 200 - ctx.fraction * 175.0
    canvas = _Canvas(ctx.spec, (0, 0, 0))
    elements = []
    d_color = (round(d_luma),) * 3
    for (x, y) in points:
        draw_disk(canvas.draw, x, y, diam, d_color)
        elements.append(_record(x, y, 0.0, diam, d_color, "disk", False, d_luma))
    t_color = (round(t_luma),) * 3
    draw_disk(canvas.target_draws, *target, diam, t_color)
    elements.append(_record(*target, 0.0, diam, t_color, "disk", True, t_luma))
    img, fp = canvas.arrays()
    return img, fp, target, elements


_HETERO_JITTER = {1: 10.0, 2: 20.0, 3: 30.0}


def _render_orientation_search(ctx: _Ctx):
    """Oriented-bar singleton; block 13 jitters distractor orientations.

    The base orientation is diagonal: bars aligned with the canvas axes
    share spectral structure with the element grid itself, which would
    mask the singleton for frequency-domain observers. Jitter is drawn in
    +/- pairs so the distractor population's circular mean stays exactly
    on the base orientation at every contrast level.
    """
    spec = ctx.spec
    bar_len, bar_w = ctx.px(BAR_LEN_DEG), ctx.px(SEARCH_BAR_WIDTH_DEG)
    base = 45.0
    target, points = _field_layout(ctx, bar_len / 2.0 + 4.0, bar_len)
    jitter = _HETERO_JITTER[spec.subtype] if spec.block == 13 else 0.0
    offsets = []
    for k in range(len(points)):
        if jitter == 0.0:
            offsets.append(0.0)
        elif k % 2 == 0:
            offsets.append(ctx.rng.uniform(0.0, jitter))
        else:
            offsets.append(-offsets[-1])
    if jitter and len(points) % 2 == 1:
        offsets[-1] = 0.0

    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []
    for (x, y), off in zip(points, offsets):
        orient = base + off
        draw_bar(canvas.draw, x, y, bar_len, bar_w, orient, ELEMENT_DARK)
        elements.append(_record(x, y, orient, bar_len, ELEMENT_DARK, "bar",
                                False, orient % 180.0))
    t_orient = base + ctx.delta.value
    draw_bar(canvas.target_draws, *target, bar_len, bar_w, t_orient, ELEMENT_DARK)
    elements.append(_record(*target, t_orient, bar_len, ELEMENT_DARK, "bar",
                            True, t_orient % 180.0))
    img, fp = canvas.arrays()
    return img, fp, target, elements


def _render_size_search(ctx: _Ctx):
    """A size singleton among uniform disks."""
    diam = ctx.px(DISK_DIAM_DEG)
    size_lo, size_hi = KIND_RANGE[FeatureKind.SIZE_RATIO]
    t_diam = diam * (size_lo + ctx.fraction * (size_hi - size_lo))
    target, points = _field_layout(ctx, t_diam / 2.0 + 4.0, t_diam)
    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []
    for (x, y) in points:
        draw_disk(canvas.draw, x, y, diam, ELEMENT_DARK)
        elements.append(_record(x, y, 0.0, diam, ELEMENT_DARK, "disk", False, diam))
    draw_disk(canvas.target_draws, *target, t_diam, ELEMENT_DARK)
    elements.append(_record(*target, 0.0, t_diam, ELEMENT_DARK, "disk", True, t_diam))
    img, fp = canvas.arrays()
    return img, fp, target, elements


_GLYPH_SUBTYPES = {
    14: {1: "arc_quarter", 2: "arc_half", 3: "ess", 4: "wave"},
    15: {1: "tee", 2: "ell", 3: "wye"},
}


def _render_glyph_search(ctx: _Ctx):
    """Orientation singleton over non-linear strokes (14) or letter-like glyphs (15)."""
    spec = ctx.spec
    shape = _GLYPH_SUBTYPES[spec.block][spec.subtype]
    size = ctx.px(GLYPH_SIZE_DEG)
    stroke = ctx.px(GLYPH_STROKE_DEG)
    extent = 1.2 * size
    target, points = _field_layout(ctx, extent / 2.0 + 4.0, extent)
    base = 0.0
    canvas = _Canvas(ctx.spec, BG_GRAY)
    elements = []
    for (x, y) in points:
        draw_glyph(canvas.draw, shape, x, y, size, stroke, base, ELEMENT_DARK)
        elements.append(_record(x, y, base, size, ELEMENT_DARK, shape, False, base))
    t_orient = base + ctx.delta.value
    draw_glyph(canvas.target_draws, shape, *target, size, stroke, t_orient, ELEMENT_DARK)
    elements.append(_record(*target, t_orient, size, ELEMENT_DARK, shape, True,
                            t_orient % 360.0))
    img, fp = canvas.arrays()
    return img, fp, target, elements


_RENDERERS = {
    1: _render_corner,
    2: _render_segmentation,
    3: _render_segmentation,
    4: _render_contour,
    5: _render_grouping,
    6: _render_feature_conjunction,
    7: _render_asymmetry,
    8: _render_rough_surface,
    9: _render_color_search,
    10: _render_brightness_search,
    11: _render_orientation_search,
    12: _render_size_search,
    13: _render_orientation_search,
    14: _render_glyph_search,
    15: _render_glyph_search,
}


# --- public API ---------------------------------------------------------------

def generate_stimulus(spec: StimulusSpec) -> Stimulus:
    """Render one stimulus; bit-identical output for identical specs."""
    spec.validate()
    delta = contrast_value(spec.block, spec.subtype, spec.psi, spec.psi_max)
    ctx = _Ctx(
        spec=spec,
        rng=np.random.default_rng(spec.seed),
        fraction=contrast_fraction(spec.psi, spec.psi_max),
        delta=delta,
    )
    try:
        image, footprint, center, elements = _RENDERERS[spec.block](ctx)
    except InfeasiblePlacement as exc:
        raise RenderOverflow(f"{spec.image_id}: {exc}") from exc
    aoi = dilate_mask(footprint, ctx.px(AOI_DILATE_DEG))
    stim = Stimulus(spec=spec, image=image, aoi_mask=aoi,
                    target_center=(float(center[0]), float(center[1])),
                    element_log=elements)
    _check_stimulus(stim, footprint)
    return stim


def _check_stimulus(stim: Stimulus, footprint: np.ndarray) -> None:
    spec = stim.spec
    w, h = spec.canvas_px
    if stim.image.shape != (h, w, 3) or stim.aoi_mask.shape != (h, w):
        raise RenderOverflow(f"{spec.image_id}: raster dims do not match canvas")
    n_set = int(stim.aoi_mask.sum())
    if n_set < 1:
        raise RenderOverflow(f"{spec.image_id}: empty AOI mask")
    if n_set > MAX_AOI_FRACTION * w * h:
        raise RenderOverflow(
            f"{spec.image_id}: AOI covers {n_set / (w * h):.1%} of the canvas"
        )
    if footprint.any() and not bool((footprint & stim.aoi_mask).sum() == footprint.sum()):
        raise RenderOverflow(f"{spec.image_id}: AOI does not cover the target footprint")
    cx = min(max(int(round(stim.target_center[0])), 0), w - 1)
    cy = min(max(int(round(stim.target_center[1])), 0), h - 1)
    if not stim.aoi_mask[cy, cx]:
        raise RenderOverflow(f"{spec.image_id}: target center outside the AOI mask")
    if spec.task is Task.VISUAL_SEARCH:
        n_targets = sum(1 for e in stim.element_log if e.is_target)
        if n_targets != 1:
            raise RenderOverflow(
                f"{spec.image_id}: expected exactly 1 target element, found {n_targets}"
            )


def dataset_specs(config: GeneratorConfig) -> list[StimulusSpec]:
    """Specs of the full grid; per-stimulus seeds are order-independent."""
    for psi in config.psi_levels:
        if not 1 <= psi <= config.psi_max:
            raise UnknownPsi(f"psi level {psi} outside 1..{config.psi_max}")
    specs = []
    for block, subtype in all_subtypes(config.blocks):
        for psi in config.psi_levels:
            specs.append(StimulusSpec(
                block=block, subtype=subtype, psi=psi,
                canvas_px=config.canvas_px, px_per_deg=config.px_per_deg,
                seed=stable_seed(config.master_seed, block, subtype, psi),
                psi_max=config.psi_max,
            ))
    return specs


def generate_dataset(config: GeneratorConfig) -> Iterator[Stimulus]:
    """Stream the |subtypes| x |psi_levels| grid of stimuli.

    Yields stimuli one at a time (a full-resolution grid does not fit in
    memory); a per-stimulus failure aborts with the failing spec named.
    """
    for spec in dataset_specs(config):
        try:
            yield generate_stimulus(spec)
        except PopbenchError as exc:
            raise RenderOverflow(f"generation failed at {spec.image_id}: {exc}") from exc


# --- audit: realized contrast --------------------------------------------------

def _circ_dist(a: float, b: float, period: float) -> float:
    d = abs(a - b) % period
    return min(d, period - d)


def _axial_mean(angles_deg: list[float]) -> float:
    doubled = np.radians(np.asarray(angles_deg) * 2.0)
    return math.degrees(math.atan2(np.sin(doubled).mean(), np.cos(doubled).mean())) / 2.0 % 180.0


def measured_feature_contrast(stim: Stimulus) -> float:
    """Target-vs-distractor difference recovered from the element log.

    This is the audited realization of the contrast level: for every block
    it is non-decreasing in psi when layouts share a seed.
    """
    spec = stim.spec
    block, subtype = spec.block, spec.subtype
    log = stim.element_log
    targets = [e for e in log if e.is_target]
    others = [e for e in log if not e.is_target]
    t = targets[0]

    if block == 1:
        return t.feature_value  # bend angle
    if block in (2, 3):
        horizontal = block == 2 and subtype == 2
        cut = stim.target_center[1] if horizontal else stim.target_center[0]
        sides = {False: [], True: []}
        for e in others:
            odd = (e.y > cut) if horizontal else (e.x > cut)
            sides[odd].append(e)
        if block == 2:
            return _circ_dist(_axial_mean([e.orientation_deg for e in sides[True]]),
                              _axial_mean([e.orientation_deg for e in sides[False]]), 180.0)
        return abs(float(np.mean([e.size_px for e in sides[True]]))
                   - float(np.mean([e.size_px for e in sides[False]])))
    if block in (4, 5):
        group = [e for e in log if e.shape.startswith(("contour_bar", "group"))]
        rest = [e for e in others if not e.shape.startswith(("contour_bar", "group"))]
        return float(np.mean([e.feature_value for e in rest])
                     - np.mean([e.feature_value for e in group]))
    if block == 6 and subtype in (3, 4):
        hue_span = KIND_RANGE[FeatureKind.COLOR_DISTANCE][1]
        best = math.inf
        for e in others:
            hue_d = _circ_dist(t.feature_value, e.feature_value, 360.0) / hue_span
            if subtype == 3:
                second = _circ_dist(t.orientation_deg, e.orientation_deg, 180.0) / 90.0
            else:
                second = abs(t.size_px - e.size_px) / max(t.size_px, e.size_px)
            best = min(best, max(hue_d, second))
        return best
    if (block, subtype) in ((6, 1),) or block == 9:
        hues = [e.feature_value for e in others]
        return min(_circ_dist(t.feature_value, h, 360.0) for h in hues)
    if block in (7, 10, 12):
        return abs(t.feature_value - float(np.mean([e.feature_value for e in others])))
    if block == 8:
        bg = next(e for e in log if e.shape == "background")
        return abs(t.feature_value - bg.feature_value)
    if block in (11, 13) or (block, subtype) == (6, 2):
        mean = _axial_mean([e.orientation_deg for e in others if e.shape == "bar"])
        return _circ_dist(t.orientation_deg % 180.0, mean, 180.0)
    if block in (14, 15):
        base = others[0].orientation_deg
        return _circ_dist(t.orientation_deg, base, 360.0)
    raise ValueError(f"no contrast measure for block {block} subtype {subtype}")

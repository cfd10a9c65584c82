"""Element drawing primitives on PIL canvases.

Orientation is measured in degrees from the +x axis; shapes are defined in
unit coordinates and scaled/rotated at draw time. Every primitive accepts
any number of draw handles so the target can be stamped onto the stimulus
and its footprint mask in one call.
"""

from __future__ import annotations

import math

import numpy as np
from PIL import ImageDraw

Color = tuple[int, int, int] | int
Point = tuple[float, float]


def rotate(points: list[Point], cx: float, cy: float, angle_deg: float) -> list[Point]:
    a = math.radians(angle_deg)
    cos_a, sin_a = math.cos(a), math.sin(a)
    out = []
    for x, y in points:
        dx, dy = x - cx, y - cy
        out.append((cx + dx * cos_a - dy * sin_a, cy + dx * sin_a + dy * cos_a))
    return out


def bar_polygon(x: float, y: float, length: float, width: float, angle_deg: float) -> list[Point]:
    hl, hw = length / 2.0, width / 2.0
    corners = [(x - hl, y - hw), (x + hl, y - hw), (x + hl, y + hw), (x - hl, y + hw)]
    return rotate(corners, x, y, angle_deg)


def draw_bar(draws, x, y, length, width, angle_deg, color) -> None:
    poly = bar_polygon(x, y, length, width, angle_deg)
    for d, c in _pairs(draws, color):
        d.polygon(poly, fill=c)


def draw_disk(draws, x, y, diameter, color) -> None:
    r = diameter / 2.0
    for d, c in _pairs(draws, color):
        d.ellipse([x - r, y - r, x + r, y + r], fill=c)


def draw_ring(draws, x, y, diameter, stroke, color) -> None:
    r = diameter / 2.0
    for d, c in _pairs(draws, color):
        d.ellipse([x - r, y - r, x + r, y + r], outline=c, width=max(1, round(stroke)))


def draw_tick_ring(draws, x, y, diameter, stroke, tick_len, color, tick_angle_deg=45.0) -> None:
    """Ring with a radial tick crossing its boundary (the classic Q shape)."""
    draw_ring(draws, x, y, diameter, stroke, color)
    if tick_len <= 0:
        return
    r = diameter / 2.0
    a = math.radians(tick_angle_deg)
    ux, uy = math.cos(a), math.sin(a)
    p0 = (x + ux * (r - tick_len / 2.0), y + uy * (r - tick_len / 2.0))
    p1 = (x + ux * (r + tick_len / 2.0), y + uy * (r + tick_len / 2.0))
    for d, c in _pairs(draws, color):
        d.line([p0, p1], fill=c, width=max(1, round(stroke)))


def stroke_path(draws, points: list[Point], stroke, color) -> None:
    w = max(1, round(stroke))
    r = w / 2.0
    for d, c in _pairs(draws, color):
        d.line(points, fill=c, width=w, joint="curve")
        # round off the stroke ends; PIL line caps are square-ish otherwise
        for px, py in (points[0], points[-1]):
            d.ellipse([px - r, py - r, px + r, py + r], fill=c)


# --- glyphs -----------------------------------------------------------------
# Each glyph is a list of unit-space polylines spanning roughly [-0.5, 0.5].

def _arc_points(span_deg: float, n: int = 24) -> list[Point]:
    # arc of the unit-diameter circle, centered on its chord midpoint
    a0 = math.radians(90 - span_deg / 2.0)
    a1 = math.radians(90 + span_deg / 2.0)
    pts = []
    for i in range(n + 1):
        a = a0 + (a1 - a0) * i / n
        pts.append((0.5 * math.cos(a), 0.5 * math.sin(a) - 0.30))
    return pts


def _sine_points(cycles: float, n: int = 32) -> list[Point]:
    pts = []
    for i in range(n + 1):
        t = i / n
        pts.append((t - 0.5, 0.35 * math.sin(2 * math.pi * cycles * t)))
    return pts


GLYPHS: dict[str, list[list[Point]]] = {
    "arc_quarter": [_arc_points(90.0)],
    "arc_half": [_arc_points(180.0)],
    "ess": [_sine_points(1.0)],
    "wave": [_sine_points(2.0)],
    "tee": [[(-0.5, -0.5), (0.5, -0.5)], [(0.0, -0.5), (0.0, 0.5)]],
    "ell": [[(-0.35, -0.5), (-0.35, 0.5)], [(-0.35, 0.5), (0.5, 0.5)]],
    "wye": [[(0.0, 0.0), (0.0, 0.55)], [(0.0, 0.0), (-0.45, -0.45)], [(0.0, 0.0), (0.45, -0.45)]],
}


def draw_glyph(draws, shape: str, x, y, size, stroke, angle_deg, color) -> None:
    for part in GLYPHS[shape]:
        pts = [(x + px * size, y + py * size) for px, py in part]
        pts = rotate(pts, x, y, angle_deg)
        stroke_path(draws, pts, stroke, color)


def _pairs(draws, color):
    """Normalize (draw | list of draws) and per-draw colors."""
    if isinstance(draws, ImageDraw.ImageDraw):
        draws = [draws]
    for d in draws:
        c = color if d.mode == "RGB" else 255
        yield d, c


def paste_noise(image: np.ndarray, noise: np.ndarray, region: np.ndarray | None = None) -> None:
    """Add grayscale noise (float, 8-bit units) to an RGB float canvas in place."""
    if region is None:
        image += noise[..., None]
    else:
        image[region] += noise[region][..., None]

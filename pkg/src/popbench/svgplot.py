"""Minimal deterministic SVG charts (no plotting dependency, no timestamps)."""

from __future__ import annotations

import math
from pathlib import Path

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 140, 40, 50
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f"]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _frame(title: str, x_label: str, y_label: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="15">{title}</text>',
        f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2}" y="{HEIGHT - 10}" '
        f'text-anchor="middle">{x_label}</text>',
        f'<text x="15" y="{(MARGIN_T + HEIGHT - MARGIN_B) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {(MARGIN_T + HEIGHT - MARGIN_B) / 2})">{y_label}</text>',
    ]


def _scales(xs, ys):
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return MARGIN_L + (v - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R)

    def sy(v):
        return HEIGHT - MARGIN_B - (v - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B)

    return sx, sy, (x0, x1, y0, y1)


def _axes(parts, sx, sy, bounds):
    x0, x1, y0, y1 = bounds
    parts.append(
        f'<line x1="{_fmt(sx(x0))}" y1="{_fmt(sy(y0))}" x2="{_fmt(sx(x1))}" '
        f'y2="{_fmt(sy(y0))}" stroke="black"/>')
    parts.append(
        f'<line x1="{_fmt(sx(x0))}" y1="{_fmt(sy(y0))}" x2="{_fmt(sx(x0))}" '
        f'y2="{_fmt(sy(y1))}" stroke="black"/>')
    for i in range(5):
        yv = y0 + (y1 - y0) * i / 4
        parts.append(
            f'<text x="{MARGIN_L - 6}" y="{_fmt(sy(yv) + 4)}" '
            f'text-anchor="end">{_fmt(round(yv, 3))}</text>')


def write_line_chart(
    path: str | Path,
    series: dict[str, list[tuple[float, float]]],
    title: str,
    x_label: str,
    y_label: str,
) -> None:
    """Named (x, y) polylines with a shared frame and a right-hand legend."""
    points = [p for pts in series.values() for p in pts]
    if not points:
        raise ValueError("no data to plot")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    sx, sy, bounds = _scales(xs, ys)
    parts = _frame(title, x_label, y_label)
    _axes(parts, sx, sy, bounds)
    for xv in sorted(set(xs)):
        parts.append(
            f'<text x="{_fmt(sx(xv))}" y="{HEIGHT - MARGIN_B + 16}" '
            f'text-anchor="middle">{_fmt(xv)}</text>')
    for i, (name, pts) in enumerate(sorted(series.items())):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in sorted(pts))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="2"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" '
                         f'fill="{color}"/>')
        ly = MARGIN_T + 16 * i
        parts.append(f'<line x1="{WIDTH - MARGIN_R + 10}" y1="{ly}" '
                     f'x2="{WIDTH - MARGIN_R + 30}" y2="{ly}" stroke="{color}" '
                     f'stroke-width="2"/>')
        parts.append(f'<text x="{WIDTH - MARGIN_R + 35}" y="{ly + 4}">{name}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def write_bar_chart(
    path: str | Path,
    groups: list[str],
    series: dict[str, list[float]],
    title: str,
    y_label: str,
) -> None:
    """Grouped vertical bars; one bar color per series."""
    values = [v for vs in series.values() for v in vs if not math.isnan(v)]
    if not values:
        raise ValueError("no data to plot")
    y0 = min(0.0, min(values))
    y1 = max(values)
    if y1 == y0:
        y1 = y0 + 1.0
    span_x = WIDTH - MARGIN_L - MARGIN_R
    group_w = span_x / max(len(groups), 1)
    bar_w = group_w * 0.8 / max(len(series), 1)

    def sy(v):
        return HEIGHT - MARGIN_B - (v - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B)

    parts = _frame(title, "", y_label)
    parts.append(f'<line x1="{MARGIN_L}" y1="{_fmt(sy(y0))}" '
                 f'x2="{WIDTH - MARGIN_R}" y2="{_fmt(sy(y0))}" stroke="black"/>')
    for i in range(5):
        yv = y0 + (y1 - y0) * i / 4
        parts.append(f'<text x="{MARGIN_L - 6}" y="{_fmt(sy(yv) + 4)}" '
                     f'text-anchor="end">{_fmt(round(yv, 3))}</text>')
    names = sorted(series)
    for gi, group in enumerate(groups):
        gx = MARGIN_L + gi * group_w + group_w * 0.1
        for si_, name in enumerate(names):
            v = series[name][gi]
            if math.isnan(v):
                continue
            color = PALETTE[si_ % len(PALETTE)]
            top = min(sy(v), sy(0.0))
            height = abs(sy(v) - sy(0.0))
            parts.append(f'<rect x="{_fmt(gx + si_ * bar_w)}" y="{_fmt(top)}" '
                         f'width="{_fmt(bar_w)}" height="{_fmt(height)}" fill="{color}"/>')
        parts.append(f'<text x="{_fmt(gx + group_w * 0.4)}" '
                     f'y="{HEIGHT - MARGIN_B + 16}" text-anchor="middle">{group}</text>')
    for si_, name in enumerate(names):
        color = PALETTE[si_ % len(PALETTE)]
        ly = MARGIN_T + 16 * si_
        parts.append(f'<rect x="{WIDTH - MARGIN_R + 10}" y="{ly - 8}" width="20" '
                     f'height="10" fill="{color}"/>')
        parts.append(f'<text x="{WIDTH - MARGIN_R + 35}" y="{ly + 2}">{name}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")

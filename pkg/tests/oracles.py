"""Independent reference implementations used to check the library.

Everything here is deliberately written the slow, literal way (explicit
loops, no shared helpers with the package) so tests compare two separate
derivations of each quantity.
"""

from __future__ import annotations

import math

import numpy as np


# --- ROC / AUC ------------------------------------------------------------------

def auc_from_values(pos_vals, neg_vals) -> float:
    """Trapezoidal ROC area with thresholds at each distinct positive value."""
    pos = list(pos_vals)
    neg = list(neg_vals)
    thresholds = sorted(set(pos), reverse=True)
    points = [(0.0, 0.0)]
    for t in thresholds:
        tp = sum(1 for v in pos if v >= t)
        fp = sum(1 for v in neg if v >= t)
        points.append((fp / len(neg), tp / len(pos)))
    points.append((1.0, 1.0))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def roc_auc_judd(sal, fmap) -> float:
    """Brute-force AUC over a saliency grid and a fixation count grid."""
    sal = np.asarray(sal, dtype=float)
    fmap = np.asarray(fmap)
    pos, neg = [], []
    for r in range(sal.shape[0]):
        for c in range(sal.shape[1]):
            if fmap[r, c] > 0:
                pos.extend([sal[r, c]] * int(fmap[r, c]))
            else:
                neg.append(sal[r, c])
    return auc_from_values(pos, neg)


# --- direct metric formulas -------------------------------------------------------

def nss_direct(sal, fmap) -> float:
    sal = np.asarray(sal, dtype=float)
    values = [v for row in sal for v in row]
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    std = math.sqrt(var)
    if std == 0:
        return 0.0
    acc, n = 0.0, 0
    fmap = np.asarray(fmap)
    for r in range(sal.shape[0]):
        for c in range(sal.shape[1]):
            for _ in range(int(fmap[r, c])):
                acc += (sal[r, c] - mean) / std
                n += 1
    return acc / n


def cc_direct(a, b) -> float:
    av = [v for row in np.asarray(a, dtype=float) for v in row]
    bv = [v for row in np.asarray(b, dtype=float) for v in row]
    ma = sum(av) / len(av)
    mb = sum(bv) / len(bv)
    num = sum((x - ma) * (y - mb) for x, y in zip(av, bv))
    da = math.sqrt(sum((x - ma) ** 2 for x in av))
    db = math.sqrt(sum((y - mb) ** 2 for y in bv))
    if da == 0 or db == 0:
        return 0.0
    return num / (da * db)


def sim_direct(s, d) -> float:
    sv = [v for row in np.asarray(s, dtype=float) for v in row]
    dv = [v for row in np.asarray(d, dtype=float) for v in row]
    st, dt = sum(sv), sum(dv)
    return sum(min(x / st, y / dt) for x, y in zip(sv, dv))


def kl_direct(s, d, eps=1e-7) -> float:
    sv = [v for row in np.asarray(s, dtype=float) for v in row]
    dv = [v for row in np.asarray(d, dtype=float) for v in row]
    st, dt = sum(sv), sum(dv)
    return sum(
        (y / dt) * math.log(eps + (y / dt) / (x / st + eps))
        for x, y in zip(sv, dv)
    )


def infogain_direct(s, fmap, baseline, eps=1e-7) -> float:
    s = np.asarray(s, dtype=float)
    b = np.asarray(baseline, dtype=float)
    s = s / s.sum()
    b = b / b.sum()
    fmap = np.asarray(fmap)
    acc, n = 0.0, 0
    for r in range(s.shape[0]):
        for c in range(s.shape[1]):
            for _ in range(int(fmap[r, c])):
                acc += math.log2(s[r, c] + eps) - math.log2(b[r, c] + eps)
                n += 1
    return acc / n


def si_direct(sal, mask) -> float:
    sal = np.asarray(sal, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    inside = [sal[r, c] for r in range(sal.shape[0]) for c in range(sal.shape[1]) if mask[r, c]]
    outside = [sal[r, c] for r in range(sal.shape[0]) for c in range(sal.shape[1]) if not mask[r, c]]
    st = sum(inside) / len(inside)
    sb = sum(outside) / len(outside)
    if sb == 0:
        return math.inf
    return (st - sb) / sb


def spearman_direct(xs, ys) -> float:
    def rank(vals):
        pairs = sorted(range(len(vals)), key=lambda i: vals[i])
        ranks = [0.0] * len(vals)
        i = 0
        while i < len(pairs):
            j = i
            while j + 1 < len(pairs) and vals[pairs[j + 1]] == vals[pairs[i]]:
                j += 1
            for k in range(i, j + 1):
                ranks[pairs[k]] = (i + j) / 2.0 + 1.0
            i = j + 1
        return ranks

    rx, ry = rank(list(xs)), rank(list(ys))
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    dy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return num / (dx * dy)


# --- model oracles ---------------------------------------------------------------

def center_gaussian_direct(dims, frac) -> np.ndarray:
    w, h = dims
    sigma = frac * math.hypot(w, h)
    grid = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            grid[y, x] = math.exp(
                -((x - w / 2.0) ** 2 + (y - h / 2.0) ** 2) / (2.0 * sigma**2)
            )
    return grid / grid.max()


def gaussian_blur_direct(img, sigma, truncate=4.0) -> np.ndarray:
    """Separable reflected-boundary gaussian smoothing, literal implementation."""
    img = np.asarray(img, dtype=float)
    radius = int(truncate * sigma + 0.5)
    xs = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (xs / sigma) ** 2)
    kernel = kernel / kernel.sum()

    def conv1d(line):
        padded = np.pad(line, radius, mode="symmetric")
        out = np.empty_like(line)
        for i in range(len(line)):
            out[i] = sum(padded[i + j] * kernel[j] for j in range(2 * radius + 1))
        return out

    rows = np.stack([conv1d(img[r, :]) for r in range(img.shape[0])])
    return np.stack([conv1d(rows[:, c]) for c in range(img.shape[1])], axis=1)


def dog_response_direct(channel, center_sigma, surround_sigma) -> np.ndarray:
    return np.abs(
        gaussian_blur_direct(channel, center_sigma)
        - gaussian_blur_direct(channel, surround_sigma)
    )


def spectral_residual_reference(gray01, work_width=64, smooth_sigma=3.0) -> np.ndarray:
    """Stand-alone spectral-residual pipeline with its own resampling.

    Downscale by area averaging, compute the log-amplitude residual against
    a 3x3 wrapped box filter, reconstruct with the original phase, square,
    smooth, and upsample by nearest neighbor.
    """
    gray01 = np.asarray(gray01, dtype=float)
    h, w = gray01.shape
    work_h = max(16, round(h * work_width / w))
    small = np.empty((work_h, work_width))
    for r in range(work_h):
        for c in range(work_width):
            r0, r1 = int(r * h / work_h), max(int((r + 1) * h / work_h), int(r * h / work_h) + 1)
            c0, c1 = int(c * w / work_width), max(int((c + 1) * w / work_width), int(c * w / work_width) + 1)
            small[r, c] = gray01[r0:r1, c0:c1].mean()

    spectrum = np.fft.fft2(small)
    log_amp = np.log(np.abs(spectrum) + 1e-12)
    boxed = np.empty_like(log_amp)
    for r in range(work_h):
        for c in range(work_width):
            acc = 0.0
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    acc += log_amp[(r + dr) % work_h, (c + dc) % work_width]
            boxed[r, c] = acc / 9.0
    residual = np.exp(log_amp - boxed)
    recon = np.fft.ifft2(residual * np.exp(1j * np.angle(spectrum)))
    sal = np.abs(recon) ** 2
    sal = gaussian_blur_direct(sal, smooth_sigma)

    full = np.empty((h, w))
    for r in range(h):
        for c in range(w):
            full[r, c] = sal[min(int(r * work_h / h), work_h - 1),
                             min(int(c * work_width / w), work_width - 1)]
    lo, hi = full.min(), full.max()
    return (full - lo) / (hi - lo) if hi > lo else np.zeros_like(full)


# --- statistics -------------------------------------------------------------------

def chi_square_uniform(points, bounds, bins=4):
    """Chi-square statistic of 2-D points against uniformity over a rectangle.

    Returns (statistic, degrees of freedom).
    """
    (x0, x1), (y0, y1) = bounds
    counts = np.zeros((bins, bins))
    for x, y in points:
        cx = min(int((x - x0) / (x1 - x0) * bins), bins - 1)
        cy = min(int((y - y0) / (y1 - y0) * bins), bins - 1)
        counts[cy, cx] += 1
    expected = len(points) / (bins * bins)
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, bins * bins - 1

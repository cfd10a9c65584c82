"""Saliency evaluation metrics.

Location-based scores (AUC variants, NSS, information gain) consume the
integer fixation count grid; distribution-based scores (CC, SIM, KL)
consume a fixation density map. The region score ``saliency_index``
consumes the ground-truth AOI mask instead of fixations, which is what
makes generator-only benchmarking possible.

Saliency maps of a different resolution are resized bilinearly onto the
reference grid before any normalization; all other grid pairs must match
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyShuffleSet, NoFixations
from .util import resize_bilinear

DEFAULT_EPSILON = 1e-7
DEFAULT_N_SPLITS = 100


@dataclass(frozen=True)
class MetricScore:
    metric: str
    value: float
    n_positives: int


@dataclass(frozen=True)
class ShuffleSet:
    """Negative fixation locations pooled from other images.

    ``locations`` is an (n, 2) array of (x, y) pixel coordinates; it must
    not contain the evaluated image's own fixations.
    """

    locations: np.ndarray

    def __len__(self) -> int:
        return len(self.locations)


def _as_saliency(smap: np.ndarray, ref_shape: tuple[int, int]) -> np.ndarray:
    s = np.asarray(smap, dtype=np.float64)
    if s.ndim != 2 or 0 in s.shape:
        raise DimensionMismatch(f"saliency map must be a 2-D grid, got {s.shape}")
    if s.shape != ref_shape:
        s = resize_bilinear(s, (ref_shape[1], ref_shape[0]))
    return s


def _positives(smap: np.ndarray, fmap: np.ndarray) -> np.ndarray:
    """Saliency values at fixated pixels, repeated per fixation count."""
    counts = np.asarray(fmap)
    if counts.sum() <= 0:
        raise NoFixations("fixation map has no fixations")
    idx = counts > 0
    return np.repeat(smap[idx], counts[idx].astype(int))


def _roc_auc(pos: np.ndarray, neg: np.ndarray) -> float:
    """Area under the ROC built from thresholds at distinct positive values.

    Points between thresholds are connected by trapezoids, which awards
    half credit to saliency ties between the two classes.
    """
    thresholds = np.unique(pos)[::-1]
    tpr = [0.0]
    fpr = [0.0]
    for t in thresholds:
        tpr.append(float((pos >= t).mean()))
        fpr.append(float((neg >= t).mean()))
    tpr.append(1.0)
    fpr.append(1.0)
    return float(np.trapezoid(tpr, fpr))


def auc_judd(smap: np.ndarray, fmap: np.ndarray) -> MetricScore:
    """ROC area with every non-fixated pixel as a negative."""
    fmap = np.asarray(fmap)
    s = _as_saliency(smap, fmap.shape)
    pos = _positives(s, fmap)
    neg = s[fmap == 0]
    if neg.size == 0:
        raise NoFixations("every pixel is fixated; no negatives left")
    return MetricScore("auc_judd", _roc_auc(pos, neg), int(pos.size))


def auc_borji(
    smap: np.ndarray,
    fmap: np.ndarray,
    n_splits: int = DEFAULT_N_SPLITS,
    n_samples: int | None = None,
    rng: np.random.Generator | None = None,
) -> MetricScore:
    """ROC area against uniformly sampled pixel negatives, averaged over splits."""
    fmap = np.asarray(fmap)
    s = _as_saliency(smap, fmap.shape)
    pos = _positives(s, fmap)
    rng = rng or np.random.default_rng(0)
    n = n_samples or pos.size
    flat = s.ravel()
    aucs = [
        _roc_auc(pos, flat[rng.integers(0, flat.size, size=n)])
        for _ in range(n_splits)
    ]
    return MetricScore("auc_borji", float(np.mean(aucs)), int(pos.size))


def sauc(
    smap: np.ndarray,
    fmap: np.ndarray,
    shuffle: ShuffleSet,
    rng: np.random.Generator | None = None,
    n_splits: int = DEFAULT_N_SPLITS,
    n_samples: int | None = None,
) -> MetricScore:
    """Shuffled AUC: negatives are fixation locations from other images.

    When the pool is not larger than the sample size the whole pool is
    used once, deterministically.
    """
    fmap = np.asarray(fmap)
    s = _as_saliency(smap, fmap.shape)
    if len(shuffle) == 0:
        raise EmptyShuffleSet("no negative locations")
    pos = _positives(s, fmap)
    locs = np.asarray(shuffle.locations)
    xs = np.clip(locs[:, 0].astype(int), 0, s.shape[1] - 1)
    ys = np.clip(locs[:, 1].astype(int), 0, s.shape[0] - 1)
    pool = s[ys, xs]
    n = n_samples or pos.size
    if n >= pool.size:
        value = _roc_auc(pos, pool)
    else:
        rng = rng or np.random.default_rng(0)
        aucs = [
            _roc_auc(pos, pool[rng.choice(pool.size, size=n, replace=False)])
            for _ in range(n_splits)
        ]
        value = float(np.mean(aucs))
    return MetricScore("sauc", value, int(pos.size))


def nss(smap: np.ndarray, fmap: np.ndarray) -> MetricScore:
    """Mean z-scored saliency at fixated pixels; zero-variance maps score 0."""
    fmap = np.asarray(fmap)
    s = _as_saliency(smap, fmap.shape)
    if fmap.sum() <= 0:
        raise NoFixations("fixation map has no fixations")
    std = s.std()
    if std == 0:
        return MetricScore("nss", 0.0, int(fmap.sum()))
    z = (s - s.mean()) / std
    return MetricScore("nss", float(_positives(z, fmap).mean()), int(fmap.sum()))


def cc(smap: np.ndarray, dmap: np.ndarray) -> MetricScore:
    """Pearson correlation between saliency and density over pixels."""
    dmap = np.asarray(dmap, dtype=np.float64)
    s = _as_saliency(smap, dmap.shape)
    sv = s.ravel() - s.mean()
    dv = dmap.ravel() - dmap.mean()
    denom = math.sqrt(float(sv @ sv)) * math.sqrt(float(dv @ dv))
    value = 0.0 if denom == 0 else float(sv @ dv) / denom
    return MetricScore("cc", value, int(dmap.size))


def _to_distribution(grid: np.ndarray, what: str) -> np.ndarray:
    total = grid.sum()
    if total <= 0:
        raise ValueError(f"{what} has no mass to normalize")
    return grid / total


def sim(smap: np.ndarray, dmap: np.ndarray) -> MetricScore:
    """Histogram intersection of the two sum-normalized maps."""
    dmap = np.asarray(dmap, dtype=np.float64)
    s = _to_distribution(_as_saliency(smap, dmap.shape), "saliency map")
    d = _to_distribution(dmap, "density map")
    return MetricScore("sim", float(np.minimum(s, d).sum()), int(dmap.size))


def kl(smap: np.ndarray, dmap: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> MetricScore:
    """Regularized KL divergence of density from saliency (both sum to one)."""
    dmap = np.asarray(dmap, dtype=np.float64)
    s = _to_distribution(_as_saliency(smap, dmap.shape), "saliency map")
    d = _to_distribution(dmap, "density map")
    value = float(np.sum(d * np.log(epsilon + d / (s + epsilon))))
    return MetricScore("kl", value, int(dmap.size))


def info_gain(
    smap: np.ndarray,
    fmap: np.ndarray,
    baseline: np.ndarray,
    epsilon: float = DEFAULT_EPSILON,
) -> MetricScore:
    """Mean log2 likelihood gain over the baseline at fixated pixels."""
    fmap = np.asarray(fmap)
    s = _to_distribution(_as_saliency(smap, fmap.shape), "saliency map")
    b = _to_distribution(_as_saliency(baseline, fmap.shape), "baseline map")
    if fmap.sum() <= 0:
        raise NoFixations("fixation map has no fixations")
    gain = np.log2(s + epsilon) - np.log2(b + epsilon)
    return MetricScore("info_gain", float(_positives(gain, fmap).mean()), int(fmap.sum()))


def saliency_index(smap: np.ndarray, mask: np.ndarray) -> MetricScore:
    """Contrast of mean saliency inside vs outside the ground-truth region.

    With all the saliency mass inside the mask the score is degenerate and
    reported as +inf; aggregation layers exclude those rows.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any() or mask.all():
        raise ValueError("mask must have both set and unset pixels")
    s = _as_saliency(smap, mask.shape)
    inside = float(s[mask].mean())
    outside = float(s[~mask].mean())
    if outside == 0.0:
        return MetricScore("si", math.inf, int(mask.sum()))
    return MetricScore("si", (inside - outside) / outside, int(mask.sum()))

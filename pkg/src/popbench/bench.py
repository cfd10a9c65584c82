"""Benchmark orchestration: scoring runs, groupings and comparisons.

The report table holds one row per (image, model, metric). All groupings
the analysis needs (per-block, per-contrast, easy/hard, task split,
gaze-wise curves) are deterministic reductions over that table or over the
per-index fixation pools, so re-running a benchmark with the same master
seed reproduces the report byte for byte.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateConstantInput,
    LengthMismatch,
    MissingInput,
    NoFixations,
)
from .fixdata import DensityParams, ScanPath, density_map, fixation_map, split_by_gaze_index
from .metrics import (
    MetricScore,
    ShuffleSet,
    auc_borji,
    auc_judd,
    cc,
    info_gain,
    kl,
    nss,
    sauc,
    saliency_index,
    sim,
)
from .models import predict_center_gaussian
from .util import stable_seed

FIXATION_METRICS = ("auc_judd", "auc_borji", "sauc", "nss", "cc", "sim", "kl", "info_gain")
MASK_METRICS = ("si",)
ALL_METRICS = MASK_METRICS + FIXATION_METRICS


@dataclass(frozen=True)
class GroupKey:
    block: int
    subtype: int
    psi: int
    difficulty: str
    task: str

    @classmethod
    def from_spec(cls, spec) -> "GroupKey":
        return cls(block=spec.block, subtype=spec.subtype, psi=spec.psi,
                   difficulty=spec.difficulty, task=spec.task.value)

    @classmethod
    def from_entry(cls, entry: Mapping) -> "GroupKey":
        return cls(block=entry["block"], subtype=entry["subtype"], psi=entry["psi"],
                   difficulty=entry["difficulty"], task=entry["task"])


@dataclass(frozen=True)
class ReportRow:
    image_id: str
    group: GroupKey
    model: str
    metric: str
    value: float
    n_positives: int = 0


class ReportTable:
    """Rows keyed uniquely by (image_id, model, metric)."""

    def __init__(self, rows: list[ReportRow] | None = None):
        self.rows: list[ReportRow] = []
        self._keys: set[tuple[str, str, str]] = set()
        for row in rows or []:
            self.add(row)

    def add(self, row: ReportRow) -> None:
        key = (row.image_id, row.model, row.metric)
        if key in self._keys:
            raise ValueError(f"duplicate report row {key}")
        self._keys.add(key)
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def select(self, model: str | None = None, metric: str | None = None) -> list[ReportRow]:
        return [r for r in self.rows
                if (model is None or r.model == model)
                and (metric is None or r.metric == metric)]

    def to_json_obj(self) -> list[dict]:
        out = []
        for r in sorted(self.rows, key=lambda r: (r.image_id, r.model, r.metric)):
            out.append({
                "image_id": r.image_id,
                "block": r.group.block, "subtype": r.group.subtype,
                "psi": r.group.psi, "difficulty": r.group.difficulty,
                "task": r.group.task,
                "model": r.model, "metric": r.metric,
                "value": r.value, "n_positives": r.n_positives,
            })
        return out

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> "ReportTable":
        table = cls()
        for d in obj:
            table.add(ReportRow(
                image_id=d["image_id"],
                group=GroupKey(d["block"], d["subtype"], d["psi"],
                               d["difficulty"], d["task"]),
                model=d["model"], metric=d["metric"],
                value=d["value"], n_positives=d.get("n_positives", 0),
            ))
        return table


@dataclass
class EvalItem:
    """One stimulus as seen by the evaluator."""

    image_id: str
    group: GroupKey
    dims: tuple[int, int]
    mask: np.ndarray | None = None


@dataclass(frozen=True)
class CurvePoint:
    key: float
    mean: float
    count: int
    stderr: float


MapProvider = Callable[[str, str], np.ndarray]


def _provider(maps) -> MapProvider:
    if callable(maps):
        return maps
    return lambda model, image_id: maps[(model, image_id)]


def build_shuffle_sets(
    scanpaths_by_image: Mapping[str, list[ScanPath]],
    task_by_image: Mapping[str, str],
    scope: str = "task",
) -> dict[str, ShuffleSet]:
    """Per-image negative pools from the other images' fixation locations.

    With the default per-task scope, free-viewing and search images do not
    mix, since their center-bias profiles differ.
    """
    locations: list[tuple[str, str, float, float]] = []
    for image_id, paths in scanpaths_by_image.items():
        task = task_by_image.get(image_id, "")
        for sp in paths:
            for rec in sp.fixations:
                locations.append((image_id, task, rec.x, rec.y))
    out = {}
    for image_id in scanpaths_by_image:
        task = task_by_image.get(image_id, "")
        pool = [
            (x, y) for other, other_task, x, y in locations
            if other != image_id and (scope == "global" or other_task == task)
        ]
        out[image_id] = ShuffleSet(np.asarray(pool, dtype=np.float64).reshape(-1, 2))
    return out


def evaluate_all(
    models: list[str],
    items: list[EvalItem],
    maps,
    metrics: list[str],
    scanpaths_by_image: Mapping[str, list[ScanPath]] | None = None,
    density_params: DensityParams | None = None,
    master_seed: int = 0,
    shuffle_scope: str = "task",
    mask_provider: Callable[[str], np.ndarray] | None = None,
) -> ReportTable:
    """Score every (image, model, metric) triple into a report table.

    Fixation-based metrics require scanpaths for each image; the saliency
    index requires the AOI mask (inline on the item or fetched lazily from
    ``mask_provider``). A missing input aborts naming the metric and image
    rather than silently skipping rows.
    """
    unknown = [m for m in metrics if m not in ALL_METRICS]
    if unknown:
        raise MissingInput(f"unknown metrics {unknown}; known: {sorted(ALL_METRICS)}")
    need_fix = [m for m in metrics if m in FIXATION_METRICS]
    if need_fix and scanpaths_by_image is None:
        raise MissingInput(f"metric {need_fix[0]} requires fixation data")
    provider = _provider(maps)
    params = density_params or DensityParams()

    shuffle_sets: dict[str, ShuffleSet] = {}
    if "sauc" in metrics:
        task_by_image = {it.image_id: it.group.task for it in items}
        shuffle_sets = build_shuffle_sets(scanpaths_by_image, task_by_image, shuffle_scope)

    baselines: dict[tuple[int, int], np.ndarray] = {}
    table = ReportTable()
    for item in items:
        fmap = dmap = None
        if need_fix:
            paths = (scanpaths_by_image or {}).get(item.image_id)
            if not paths:
                raise MissingInput(
                    f"metric {need_fix[0]} requires fixations for image {item.image_id}"
                )
            fmap = fixation_map(paths, item.dims)
            if any(m in metrics for m in ("cc", "sim", "kl")):
                dmap = density_map(fmap, params)
        mask = item.mask
        if "si" in metrics:
            if mask is None and mask_provider is not None:
                mask = mask_provider(item.image_id)
            if mask is None:
                raise MissingInput(f"metric si requires an AOI mask for image {item.image_id}")
        if "info_gain" in metrics and item.dims not in baselines:
            baselines[item.dims] = predict_center_gaussian(item.dims)
        for model in models:
            smap = provider(model, item.image_id)
            for metric in metrics:
                score = _score_one(metric, smap, item, mask, fmap, dmap,
                                   baselines.get(item.dims), shuffle_sets,
                                   master_seed, model)
                table.add(ReportRow(
                    image_id=item.image_id, group=item.group, model=model,
                    metric=metric, value=score.value, n_positives=score.n_positives,
                ))
    return table


def _score_one(metric, smap, item, mask, fmap, dmap, baseline, shuffle_sets,
               master_seed, model) -> MetricScore:
    if metric == "si":
        return saliency_index(smap, mask)
    if metric == "auc_judd":
        return auc_judd(smap, fmap)
    if metric == "nss":
        return nss(smap, fmap)
    if metric == "cc":
        return cc(smap, dmap)
    if metric == "sim":
        return sim(smap, dmap)
    if metric == "kl":
        return kl(smap, dmap)
    if metric == "info_gain":
        return info_gain(smap, fmap, baseline)
    rng = np.random.default_rng(stable_seed(master_seed, model, item.image_id, metric))
    if metric == "auc_borji":
        return auc_borji(smap, fmap, rng=rng)
    if metric == "sauc":
        shuffle = shuffle_sets.get(item.image_id)
        if shuffle is None or len(shuffle) == 0:
            raise MissingInput(f"metric sauc has no shuffle pool for image {item.image_id}")
        return sauc(smap, fmap, shuffle, rng=rng)
    raise MissingInput(f"unknown metric {metric}")


# --- aggregation ----------------------------------------------------------------

_GROUP_FIELDS = ("block", "subtype", "psi", "difficulty", "task")


def group_scores(table: ReportTable, by: tuple[str, ...]) -> list[dict]:
    """Mean/count/stderr per (group fields, model, metric).

    Non-finite values (degenerate saliency-index sentinels) are excluded
    from the statistics; the exclusion count is reported per group.
    """
    for name in by:
        if name not in _GROUP_FIELDS:
            raise KeyError(f"unknown group field {name!r}; valid: {_GROUP_FIELDS}")
    buckets: dict[tuple, list[float]] = {}
    excluded: dict[tuple, int] = {}
    for row in table.rows:
        key = tuple(getattr(row.group, f) for f in by) + (row.model, row.metric)
        if math.isfinite(row.value):
            buckets.setdefault(key, []).append(row.value)
            excluded.setdefault(key, 0)
        else:
            excluded[key] = excluded.get(key, 0) + 1
            buckets.setdefault(key, [])
    out = []
    for key in sorted(buckets, key=repr):
        values = buckets[key]
        entry = dict(zip(by, key[:-2]))
        entry["model"], entry["metric"] = key[-2], key[-1]
        entry["count"] = len(values)
        entry["excluded"] = excluded[key]
        if values:
            entry["mean"] = float(np.mean(values))
            entry["stderr"] = _stderr(values)
        else:
            entry["mean"] = math.nan
            entry["stderr"] = math.nan
        out.append(entry)
    return out


def _stderr(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def si_vs_contrast(table: ReportTable, model: str, block: int | None = None) -> list[CurvePoint]:
    """Mean saliency index per contrast level for one model."""
    rows = [r for r in table.select(model=model, metric="si")
            if block is None or r.group.block == block]
    by_psi: dict[int, list[float]] = {}
    for r in rows:
        if math.isfinite(r.value):
            by_psi.setdefault(r.group.psi, []).append(r.value)
    return [
        CurvePoint(key=float(psi), mean=float(np.mean(vals)),
                   count=len(vals), stderr=_stderr(vals))
        for psi, vals in sorted(by_psi.items())
    ]


def gaze_wise_sauc(
    model_maps,
    items: list[EvalItem],
    scanpaths: list[ScanPath],
    max_index: int,
    min_count: int = 10,
    shuffle_scope: str = "task",
    master_seed: int = 0,
) -> list[CurvePoint]:
    """Shuffled AUC computed separately for each fixation index.

    Index-k positives of an image are scored against index-k fixations of
    the other images; points backed by fewer than ``min_count`` positives
    are omitted. ``model_maps`` maps image ids to one model's saliency maps.
    """
    provider = model_maps if callable(model_maps) else model_maps.__getitem__
    items_by_id = {it.image_id: it for it in items}
    paths_by_image: dict[str, list[ScanPath]] = {}
    for sp in scanpaths:
        if sp.image_id in items_by_id:
            paths_by_image.setdefault(sp.image_id, []).append(sp)
    if not paths_by_image:
        raise NoFixations("no scanpaths match the evaluated images")

    points = []
    for k in range(1, max_index + 1):
        per_image: dict[str, list[tuple[float, float]]] = {}
        for image_id, paths in paths_by_image.items():
            recs = split_by_gaze_index(paths, k)[k - 1]
            if recs:
                per_image[image_id] = [(r.x, r.y) for r in recs]
        values = []
        n_pos = 0
        for image_id, pos_locs in sorted(per_image.items()):
            item = items_by_id[image_id]
            pool = [
                loc for other, locs in per_image.items() if other != image_id
                and (shuffle_scope == "global"
                     or items_by_id[other].group.task == item.group.task)
                for loc in locs
            ]
            if not pool:
                continue
            w, h = item.dims
            fmap = np.zeros((h, w), dtype=np.int32)
            for x, y in pos_locs:
                fmap[min(max(int(round(y)), 0), h - 1), min(max(int(round(x)), 0), w - 1)] += 1
            rng = np.random.default_rng(stable_seed(master_seed, image_id, "gaze", k))
            score = sauc(provider(image_id), fmap,
                         ShuffleSet(np.asarray(pool, dtype=np.float64)), rng=rng)
            values.append(score.value)
            n_pos += score.n_positives
        if n_pos >= min_count and values:
            points.append(CurvePoint(key=float(k), mean=float(np.mean(values)),
                                     count=n_pos, stderr=_stderr(values)))
    return points


# --- statistics -----------------------------------------------------------------

def _ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0  # average rank, 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(xs: list[float], ys: list[float]) -> float:
    """Rank correlation with average-rank tie handling."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)} values")
    if len(xs) < 2:
        raise LengthMismatch("need at least two pairs")
    if len(set(xs)) == 1 or len(set(ys)) == 1:
        raise DegenerateConstantInput("rank correlation of a constant sequence")
    rx = np.asarray(_ranks(xs))
    ry = np.asarray(_ranks(ys))
    rx -= rx.mean()
    ry -= ry.mean()
    return float((rx @ ry) / math.sqrt((rx @ rx) * (ry @ ry)))


def compare_to_baseline(
    table: ReportTable, baseline_model_id: str
) -> tuple[list[dict], dict[str, float | None]]:
    """Per-row deltas against a baseline model, plus contrast-curve correlations.

    The second result maps each model to the Spearman correlation between
    its SI-vs-contrast curve and the baseline's (None when a curve is
    degenerate or too short).
    """
    base_rows = {(r.image_id, r.metric): r.value
                 for r in table.select(model=baseline_model_id)}
    if not base_rows:
        raise MissingInput(f"no rows for baseline model {baseline_model_id!r}")
    models = sorted({r.model for r in table.rows})
    deltas = []
    for row in table.rows:
        base = base_rows.get((row.image_id, row.metric))
        if base is None:
            raise MissingInput(
                f"baseline {baseline_model_id!r} missing for "
                f"({row.image_id}, {row.metric})"
            )
        deltas.append({
            "image_id": row.image_id, "model": row.model, "metric": row.metric,
            "delta": row.value - base,
        })
    base_curve = si_vs_contrast(table, baseline_model_id)
    base_means = {p.key: p.mean for p in base_curve}
    correlations: dict[str, float | None] = {}
    for model in models:
        curve = si_vs_contrast(table, model)
        shared = [p for p in curve if p.key in base_means]
        if len(shared) < 2:
            correlations[model] = None
            continue
        try:
            correlations[model] = spearman(
                [p.mean for p in shared], [base_means[p.key] for p in shared]
            )
        except DegenerateConstantInput:
            correlations[model] = None
    return deltas, correlations

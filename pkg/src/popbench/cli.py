"""Command-line frontend: generate, predict, evaluate, report.

Runs are driven by an INI-style config file (one ``[run]`` section); every
flag overrides its config key. All commands are idempotent for a fixed
config and master seed, and exit with 0 on success, 1 on a runtime
failure and 2 on a configuration or input error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bench import (
    ALL_METRICS,
    EvalItem,
    FIXATION_METRICS,
    GroupKey,
    ReportTable,
    compare_to_baseline,
    evaluate_all,
    gaze_wise_sauc,
    group_scores,
)
from .errors import MissingInput, PopbenchError, UnreadableMap
from .fixdata import load_fixations
from .imageops import load_image_rgb, load_mask, save_map
from .models import REGISTRY, ModelConfig, load_external_map, run_predictor
from .stimgen import GeneratorConfig, dataset_specs, generate_stimulus
from .stimgen.generator import StimulusSpec
from .stimgen.storage import load_manifest, save_stimulus, write_manifest
from .svgplot import write_bar_chart, write_line_chart

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2
DEFAULT_MODELS = ["center", "sr", "pft", "dog"]


class ConfigError(PopbenchError):
    pass


@dataclass
class RunConfig:
    out_dir: Path = Path("run")
    master_seed: int = 0
    blocks: list[int] | None = None
    psi_levels: list[int] = field(default_factory=lambda: list(range(1, 8)))
    psi_max: int = 7
    canvas_px: tuple[int, int] = (1280, 1024)
    px_per_deg: float = 40.0
    models: list[str] = field(default_factory=lambda: list(DEFAULT_MODELS))
    metrics: list[str] | None = None
    fixations: Path | None = None
    maps_dir: Path | None = None
    jobs: int = 1
    formats: list[str] = field(default_factory=lambda: ["csv", "svg"])

    @property
    def maps_root(self) -> Path:
        return self.maps_dir if self.maps_dir else self.out_dir / "maps"


def _parse_int_list(text: str) -> list[int]:
    out = []
    for chunk in text.replace(" ", "").split(","):
        if not chunk:
            continue
        if "-" in chunk:
            lo, hi = chunk.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    if not out:
        raise ConfigError(f"empty selection {text!r}")
    return out


def load_config(path: str | None, overrides: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if path:
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file {path} not found")
        if "run" not in parser:
            raise ConfigError(f"{path}: missing [run] section")
        sec = parser["run"]
        if "out" in sec:
            cfg.out_dir = Path(sec["out"])
        if "master_seed" in sec:
            cfg.master_seed = sec.getint("master_seed")
        if "blocks" in sec:
            cfg.blocks = _parse_int_list(sec["blocks"])
        if "psi" in sec:
            cfg.psi_levels = _parse_int_list(sec["psi"])
        if "psi_max" in sec:
            cfg.psi_max = sec.getint("psi_max")
        if "canvas" in sec:
            w, _, h = sec["canvas"].lower().partition("x")
            cfg.canvas_px = (int(w), int(h))
        if "px_per_deg" in sec:
            cfg.px_per_deg = sec.getfloat("px_per_deg")
        if "models" in sec:
            cfg.models = [m.strip() for m in sec["models"].split(",") if m.strip()]
        if "metrics" in sec:
            cfg.metrics = [m.strip() for m in sec["metrics"].split(",") if m.strip()]
        if "fixations" in sec:
            cfg.fixations = Path(sec["fixations"])
        if "maps_dir" in sec:
            cfg.maps_dir = Path(sec["maps_dir"])
        if "jobs" in sec:
            cfg.jobs = sec.getint("jobs")
        if "formats" in sec:
            cfg.formats = [f.strip() for f in sec["formats"].split(",") if f.strip()]
    if overrides.out:
        cfg.out_dir = Path(overrides.out)
    if overrides.seed is not None:
        cfg.master_seed = overrides.seed
    if getattr(overrides, "blocks", None):
        cfg.blocks = _parse_int_list(overrides.blocks)
    if getattr(overrides, "psi", None):
        cfg.psi_levels = _parse_int_list(overrides.psi)
    if getattr(overrides, "models", None):
        cfg.models = [m.strip() for m in overrides.models.split(",") if m.strip()]
    if getattr(overrides, "metrics", None):
        cfg.metrics = [m.strip() for m in overrides.metrics.split(",") if m.strip()]
    if getattr(overrides, "fixations", None):
        cfg.fixations = Path(overrides.fixations)
    if getattr(overrides, "maps_dir", None):
        cfg.maps_dir = Path(overrides.maps_dir)
    if overrides.jobs is not None:
        cfg.jobs = overrides.jobs
    if cfg.jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {cfg.jobs}")
    return cfg


# --- generate -------------------------------------------------------------------

def _generate_one(args: tuple[StimulusSpec, str]) -> dict:
    spec, out_dir = args
    stim = generate_stimulus(spec)
    return save_stimulus(stim, out_dir)


def cmd_generate(cfg: RunConfig) -> int:
    gen = GeneratorConfig(
        blocks=cfg.blocks, psi_levels=cfg.psi_levels, psi_max=cfg.psi_max,
        master_seed=cfg.master_seed, canvas_px=cfg.canvas_px,
        px_per_deg=cfg.px_per_deg,
    )
    try:
        specs = dataset_specs(gen)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        probe = cfg.out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except (PopbenchError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    work = [(spec, str(cfg.out_dir)) for spec in specs]
    try:
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                entries = list(pool.map(_generate_one, work, chunksize=4))
        else:
            entries = [_generate_one(w) for w in work]
    except PopbenchError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    write_manifest(cfg.out_dir, entries, {
        "master_seed": cfg.master_seed,
        "canvas_px": list(cfg.canvas_px),
        "px_per_deg": cfg.px_per_deg,
        "psi_max": cfg.psi_max,
    })
    print(f"generated {len(entries)} stimuli under {cfg.out_dir}")
    return EXIT_OK


# --- predict --------------------------------------------------------------------

def _predict_one(args: tuple[str, str, str, str]) -> str:
    model_id, image_path, map_path, image_id = args
    image = load_image_rgb(image_path)
    sal = run_predictor(model_id, image, ModelConfig())
    save_map(map_path, sal)
    return image_id


def cmd_predict(cfg: RunConfig) -> int:
    try:
        manifest = load_manifest(cfg.out_dir)
    except OSError as exc:
        print(f"config error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    unknown = [m for m in cfg.models if m not in REGISTRY]
    if unknown:
        print(f"config error: unknown model ids {unknown}; "
              f"registry: {sorted(REGISTRY)}", file=sys.stderr)
        return EXIT_CONFIG
    work = []
    for model_id in cfg.models:
        model_dir = cfg.maps_root / model_id
        model_dir.mkdir(parents=True, exist_ok=True)
        for entry in manifest["stimuli"]:
            work.append((
                model_id,
                str(cfg.out_dir / entry["image"]),
                str(model_dir / f"{entry['image_id']}.png"),
                entry["image_id"],
            ))
    try:
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                done = list(pool.map(_predict_one, work, chunksize=4))
        else:
            done = [_predict_one(w) for w in work]
    except (PopbenchError, OSError) as exc:
        print(f"prediction failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(done)} saliency maps under {cfg.maps_root}")
    return EXIT_OK


# --- evaluate -------------------------------------------------------------------

def _load_scanpaths(cfg: RunConfig) -> dict[str, list]:
    paths = load_fixations(cfg.fixations, dims=cfg.canvas_px)
    by_image: dict[str, list] = {}
    for sp in paths:
        by_image.setdefault(sp.image_id, []).append(sp)
    return by_image


def cmd_evaluate(cfg: RunConfig) -> int:
    try:
        manifest = load_manifest(cfg.out_dir)
    except OSError as exc:
        print(f"config error: cannot read manifest: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    have_fixations = cfg.fixations is not None
    metrics = cfg.metrics
    if metrics is None:
        metrics = list(ALL_METRICS) if have_fixations else ["si"]
        if not have_fixations:
            print("no fixation data given: restricting metrics to si")
    bad = [m for m in metrics if m not in ALL_METRICS]
    if bad:
        print(f"config error: unknown metrics {bad}; known: {sorted(ALL_METRICS)}",
              file=sys.stderr)
        return EXIT_CONFIG
    needs_fix = [m for m in metrics if m in FIXATION_METRICS]
    if needs_fix and not have_fixations:
        print(f"config error: metric {needs_fix[0]} requires --fixations",
              file=sys.stderr)
        return EXIT_CONFIG

    entries = manifest["stimuli"]
    canvas = tuple(manifest["config"]["canvas_px"])
    items = [
        EvalItem(image_id=e["image_id"], group=GroupKey.from_entry(e),
                 dims=(canvas[0], canvas[1]))
        for e in entries
    ]
    by_id = {e["image_id"]: e for e in entries}

    def mask_provider(image_id: str) -> np.ndarray:
        return load_mask(cfg.out_dir / by_id[image_id]["mask"])

    def map_provider(model_id: str, image_id: str) -> np.ndarray:
        path = cfg.maps_root / model_id / f"{image_id}.png"
        return load_external_map(path, canvas)

    scanpaths_by_image = None
    if have_fixations:
        try:
            scanpaths_by_image = _load_scanpaths(cfg)
        except (PopbenchError, OSError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        missing = [it.image_id for it in items
                   if it.image_id not in scanpaths_by_image]
        if missing and needs_fix:
            print(f"config error: no fixations for images {missing[:5]} "
                  f"({len(missing)} total)", file=sys.stderr)
            return EXIT_CONFIG

    try:
        table = evaluate_all(
            cfg.models, items, map_provider, metrics,
            scanpaths_by_image=scanpaths_by_image,
            master_seed=cfg.master_seed, mask_provider=mask_provider,
        )
    except (MissingInput, UnreadableMap) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PopbenchError as exc:
        print(f"evaluation failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    report = {
        "config": {
            "master_seed": cfg.master_seed,
            "models": sorted(cfg.models),
            "metrics": sorted(metrics),
        },
        "rows": table.to_json_obj(),
    }
    report_path = cfg.out_dir / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True))

    if have_fixations:
        curves = {}
        scanpaths_flat = [sp for sps in scanpaths_by_image.values() for sp in sps]
        for model_id in sorted(cfg.models):
            pts = gaze_wise_sauc(
                lambda iid, m=model_id: map_provider(m, iid),
                items, scanpaths_flat, max_index=5, min_count=10,
                master_seed=cfg.master_seed,
            )
            curves[model_id] = [
                {"index": p.key, "mean": p.mean, "count": p.count, "stderr": p.stderr}
                for p in pts
            ]
        (cfg.out_dir / "gaze_curves.json").write_text(
            json.dumps(curves, indent=2, sort_keys=True))
    print(f"wrote {report_path} with {len(table)} rows")
    return EXIT_OK


# --- report ---------------------------------------------------------------------

def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.10g}" if isinstance(v, float) else v for v in row])


def _pivot(agg: list[dict], key: str) -> tuple[list, list[str], dict]:
    models = sorted({r["model"] for r in agg})
    keys = sorted({r[key] for r in agg})
    cell = {(r[key], r["model"]): r["mean"] for r in agg}
    return keys, models, cell


def cmd_report(cfg: RunConfig) -> int:
    report_path = cfg.out_dir / "report.json"
    if not report_path.exists():
        print(f"config error: {report_path} not found; run evaluate first",
              file=sys.stderr)
        return EXIT_CONFIG
    payload = json.loads(report_path.read_text())
    if not payload.get("rows"):
        print("config error: report table is empty", file=sys.stderr)
        return EXIT_CONFIG
    table = ReportTable.from_json_obj(payload["rows"])
    out = cfg.out_dir / "report"
    out.mkdir(parents=True, exist_ok=True)
    si_rows = [r for r in table.rows if r.metric == "si"]

    sections = {
        "si_per_block": ("block",),
        "si_easy_hard": ("difficulty",),
        "si_task": ("task",),
        "si_vs_psi": ("psi",),
    }
    for name, by in sections.items():
        agg = [r for r in group_scores(table, by=by) if r["metric"] == "si"]
        if not agg:
            continue
        key = by[0]
        keys, models, cell = _pivot(agg, key)
        if "csv" in cfg.formats:
            rows = [[k] + [cell.get((k, m), math.nan) for m in models] for k in keys]
            _write_csv(out / f"{name}.csv", [key] + models, rows)
        if "svg" in cfg.formats:
            if key == "psi":
                series = {
                    m: [(float(k), cell[(k, m)]) for k in keys if (k, m) in cell]
                    for m in models
                }
                write_line_chart(out / f"{name}.svg", series,
                                 "saliency index vs feature contrast",
                                 "contrast level", "mean SI")
            else:
                series = {m: [cell.get((k, m), math.nan) for k in keys] for m in models}
                write_bar_chart(out / f"{name}.svg", [str(k) for k in keys], series,
                                f"saliency index by {key}", "mean SI")

    gaze_path = cfg.out_dir / "gaze_curves.json"
    if gaze_path.exists():
        curves = json.loads(gaze_path.read_text())
        rows = []
        series = {}
        for model, pts in sorted(curves.items()):
            for p in pts:
                rows.append([model, p["index"], p["mean"], p["count"], p["stderr"]])
            if pts:
                series[model] = [(p["index"], p["mean"]) for p in pts]
        if rows:
            if "csv" in cfg.formats:
                _write_csv(out / "gaze_wise_sauc.csv",
                           ["model", "index", "mean", "count", "stderr"], rows)
            if "svg" in cfg.formats and series:
                write_line_chart(out / "gaze_wise_sauc.svg", series,
                                 "shuffled AUC by fixation index",
                                 "fixation index", "mean sAUC")
    else:
        print("note: no gaze-wise rows present; section skipped")

    if si_rows and any(r.model == "center" for r in si_rows):
        try:
            _, corr = compare_to_baseline(table, "center")
            rows = [[m, "" if rho is None else rho] for m, rho in sorted(corr.items())]
            if "csv" in cfg.formats:
                _write_csv(out / "baseline_contrast_spearman.csv",
                           ["model", "spearman_vs_center"], rows)
        except MissingInput:
            pass
    print(f"report written under {out}")
    return EXIT_OK


# --- entry point ------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="INI config file with a [run] section")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--seed", type=int, default=None, help="master seed")
    sub.add_argument("--jobs", type=int, default=None, help="parallel workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="popbench",
        description="synthetic pop-out stimulus generation and saliency benchmarking",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="render the stimulus grid")
    _add_common(gen)
    gen.add_argument("--blocks", help="block selection, e.g. 1-15 or 9,10")
    gen.add_argument("--psi", help="contrast levels, e.g. 1-7 or 5,6,7")

    pred = subs.add_parser("predict", help="run predictors over the manifest")
    _add_common(pred)
    pred.add_argument("--models", help="comma-separated model ids")
    pred.add_argument("--maps-dir", dest="maps_dir", help="saliency map root")

    ev = subs.add_parser("evaluate", help="score maps against ground truth")
    _add_common(ev)
    ev.add_argument("--models", help="comma-separated model ids")
    ev.add_argument("--metrics", help="comma-separated metric names")
    ev.add_argument("--fixations", help="fixation CSV path")
    ev.add_argument("--maps-dir", dest="maps_dir", help="saliency map root")

    rep = subs.add_parser("report", help="aggregate tables and charts")
    _add_common(rep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    command = {
        "generate": cmd_generate,
        "predict": cmd_predict,
        "evaluate": cmd_evaluate,
        "report": cmd_report,
    }[args.command]
    try:
        return command(cfg)
    except PopbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

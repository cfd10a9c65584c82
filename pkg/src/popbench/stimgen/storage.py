"""On-disk layout for generated datasets.

One stimulus becomes three files next to each other:
``<block>_<subtype>_<psi>.png`` (RGB image), ``..._mask.png`` (0/255 AOI)
and ``..._meta.json`` (spec, target center, element log). ``manifest.json``
is the single source of truth that downstream commands read.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..imageops import load_image_rgb, load_mask, save_image_rgb, save_mask
from .contrast import contrast_value
from .generator import Stimulus


def save_stimulus(stim: Stimulus, out_dir: str | Path) -> dict:
    """Write image/mask/meta and return the manifest entry."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    iid = stim.image_id
    image_name = f"{iid}.png"
    mask_name = f"{iid}_mask.png"
    meta_name = f"{iid}_meta.json"
    save_image_rgb(out / image_name, stim.image)
    save_mask(out / mask_name, stim.aoi_mask)

    spec = stim.spec
    delta = contrast_value(spec.block, spec.subtype, spec.psi, spec.psi_max)
    meta = {
        "image_id": iid,
        "spec": {
            "block": spec.block,
            "subtype": spec.subtype,
            "psi": spec.psi,
            "psi_max": spec.psi_max,
            "canvas_px": list(spec.canvas_px),
            "px_per_deg": spec.px_per_deg,
            "seed": spec.seed,
        },
        "block_name": spec.block_id.name,
        "task": spec.task.value,
        "difficulty": spec.difficulty,
        "feature": {"kind": delta.kind.value, "value": delta.value},
        "target_center": list(stim.target_center),
        "element_log": [e.to_dict() for e in stim.element_log],
    }
    (out / meta_name).write_text(json.dumps(meta, indent=2, sort_keys=True))

    return {
        "image_id": iid,
        "block": spec.block,
        "subtype": spec.subtype,
        "psi": spec.psi,
        "task": spec.task.value,
        "difficulty": spec.difficulty,
        "target_center": list(stim.target_center),
        "image": image_name,
        "mask": mask_name,
        "meta": meta_name,
    }


def write_manifest(out_dir: str | Path, entries: list[dict], config_meta: dict) -> Path:
    path = Path(out_dir) / "manifest.json"
    entries = sorted(entries, key=lambda e: (e["block"], e["subtype"], e["psi"]))
    payload = {"config": config_meta, "stimuli": entries}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return path


def load_manifest(out_dir: str | Path) -> dict:
    path = Path(out_dir) / "manifest.json"
    return json.loads(path.read_text())


def load_stimulus_arrays(out_dir: str | Path, entry: dict):
    """(image, mask) arrays for one manifest entry."""
    out = Path(out_dir)
    return load_image_rgb(out / entry["image"]), load_mask(out / entry["mask"])

"""Raster helpers: mask dilation, grayscale conversion, image and map files."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import UnreadableMap

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def to_gray(image: np.ndarray) -> np.ndarray:
    """RGB or grayscale uint8/float image -> float64 luma in [0, 1]."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 3:
        r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
        arr = LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b
    if np.issubdtype(np.asarray(image).dtype, np.integer):
        arr = arr / 255.0
    return arr


def dilate_mask(mask: np.ndarray, radius_px: float) -> np.ndarray:
    """Euclidean dilation of a boolean mask by ``radius_px``.

    Works on the padded bounding box of the set pixels so full-canvas masks
    with small footprints stay cheap.
    """
    mask = np.asarray(mask, dtype=bool)
    if radius_px <= 0 or not mask.any():
        return mask.copy()
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    pad = int(np.ceil(radius_px)) + 1
    r0 = max(rows[0] - pad, 0)
    r1 = min(rows[-1] + pad + 1, mask.shape[0])
    c0 = max(cols[0] - pad, 0)
    c1 = min(cols[-1] + pad + 1, mask.shape[1])
    window = mask[r0:r1, c0:c1]
    dist = ndimage.distance_transform_edt(~window)
    out = mask.copy()
    out[r0:r1, c0:c1] = dist <= radius_px
    return out


def save_image_rgb(path: str | Path, image: np.ndarray) -> None:
    Image.fromarray(np.asarray(image, dtype=np.uint8), mode="RGB").save(path)


def load_image_rgb(path: str | Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8)


def save_mask(path: str | Path, mask: np.ndarray) -> None:
    """Binary mask -> 0/255 grayscale PNG."""
    arr = (np.asarray(mask, dtype=bool) * np.uint8(255))
    Image.fromarray(arr, mode="L").save(path)


def load_mask(path: str | Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("L")) > 127


def save_map(path: str | Path, grid: np.ndarray) -> None:
    """Save a [0, 1] scalar field as 16-bit grayscale PNG."""
    arr = np.clip(np.asarray(grid, dtype=np.float64), 0.0, 1.0)
    scaled = np.round(arr * 65535.0).astype(np.uint16)
    Image.fromarray(scaled).save(path)  # uint16 maps to 16-bit grayscale


def load_map_png(path: str | Path) -> np.ndarray:
    """Grayscale PNG (8- or 16-bit) -> float64 field scaled to [0, 1]."""
    with Image.open(path) as img:
        if img.mode in ("I;16", "I"):
            arr = np.asarray(img, dtype=np.float64)
            return arr / 65535.0
        if img.mode != "L":
            img = img.convert("L")
        return np.asarray(img, dtype=np.float64) / 255.0


def load_map_raw(path: str | Path, dims: tuple[int, int]) -> np.ndarray:
    """Flat row-major float32 file -> (h, w) float64 field."""
    w, h = dims
    data = np.fromfile(str(path), dtype=np.float32)
    if data.size != w * h:
        raise UnreadableMap(
            f"{path}: expected {w * h} float32 values for {w}x{h}, found {data.size}"
        )
    return data.reshape(h, w).astype(np.float64)

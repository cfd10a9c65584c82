"""Reference saliency predictors and external map ingestion.

The runnable set is deliberately small: a center-Gaussian baseline, two
frequency-domain predictors working on a downscaled grayscale image, and a
multi-channel center-surround contrast model. Everything else enters the
benchmark as externally computed maps via :func:`load_external_map`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import BadScalePair, ImageTooSmall, UnreadableMap
from .imageops import load_map_png, load_map_raw, to_gray
from .util import minmax_normalize, resize_bilinear

MIN_IMAGE_PX = 16


class Inspiration(str, Enum):
    COGNITIVE = "Cognitive"
    INFO_THEORETIC = "InfoTheoretic"
    PROBABILISTIC = "Probabilistic"
    SPECTRAL = "Spectral"
    DEEP_LEARNING = "DeepLearning"
    BASELINE = "Baseline"


@dataclass(frozen=True)
class PredictorDescriptor:
    id: str
    inspiration: Inspiration
    global_scope: bool = True
    local_scope: bool = False


@dataclass(frozen=True)
class ModelConfig:
    # frequency-domain models need a working scale at which one element
    # spans a few pixels; 256 suits the default 1280 px canvas with 40 px
    # elements (the classic 64 px convention leaves them sub-pixel)
    resize_width_px: int = 256
    smoothing_sigma_px: float = 3.0
    dog_scales: tuple[tuple[float, float], ...] = ((2.0, 8.0), (4.0, 16.0))
    center_sigma_frac: float = 1.0 / 6.0

    def validate(self) -> None:
        if self.resize_width_px < MIN_IMAGE_PX:
            raise ImageTooSmall(f"working width must be >= {MIN_IMAGE_PX} px")
        if self.smoothing_sigma_px <= 0 or self.center_sigma_frac <= 0:
            raise ValueError("sigmas must be positive")


def predict_center_gaussian(
    dims: tuple[int, int], center_sigma_frac: float = 1.0 / 6.0
) -> np.ndarray:
    """Isotropic Gaussian prior at the canvas center, peak normalized to 1."""
    w, h = dims
    if w <= 0 or h <= 0:
        raise ValueError(f"dims must be positive, got {dims}")
    sigma = center_sigma_frac * np.hypot(w, h)
    yy, xx = np.mgrid[0:h, 0:w]
    g = np.exp(-(((xx - w / 2.0) ** 2) + ((yy - h / 2.0) ** 2)) / (2.0 * sigma**2))
    return g / g.max()


def _working_gray(image: np.ndarray, width: int) -> tuple[np.ndarray, tuple[int, int]]:
    gray = to_gray(image)
    h, w = gray.shape
    if min(h, w) < MIN_IMAGE_PX:
        raise ImageTooSmall(f"image {w}x{h} below {MIN_IMAGE_PX} px minimum")
    width = min(width, w)  # downscale only
    work_h = max(MIN_IMAGE_PX, round(h * width / w))
    return resize_bilinear(gray, (width, work_h)), (w, h)


def _spectral_pipeline(image: np.ndarray, config: ModelConfig, residual: bool) -> np.ndarray:
    """Shared frequency-domain pipeline for the residual and phase-only variants."""
    config.validate()
    small, (w, h) = _working_gray(image, config.resize_width_px)
    if small.max() - small.min() < 1e-12:
        # no structure at all: a flat map, not normalization noise
        return np.zeros((h, w))
    spectrum = np.fft.fft2(small)
    phase = np.angle(spectrum)
    if residual:
        log_amp = np.log(np.abs(spectrum) + 1e-12)
        # the spectrum is periodic, so the box filter wraps
        local_mean = ndimage.uniform_filter(log_amp, size=3, mode="wrap")
        amplitude = np.exp(log_amp - local_mean)
    else:
        amplitude = np.ones_like(small)
    recon = np.fft.ifft2(amplitude * np.exp(1j * phase))
    sal = np.abs(recon) ** 2
    sal = ndimage.gaussian_filter(sal, config.smoothing_sigma_px)
    sal = resize_bilinear(sal, (w, h))
    return minmax_normalize(sal)


def predict_spectral_residual(image: np.ndarray, config: ModelConfig = ModelConfig()) -> np.ndarray:
    """Residual of the log-amplitude spectrum, reconstructed with the original phase."""
    return _spectral_pipeline(image, config, residual=True)


def predict_pft(image: np.ndarray, config: ModelConfig = ModelConfig()) -> np.ndarray:
    """Phase-only reconstruction: unit amplitude, original phase."""
    return _spectral_pipeline(image, config, residual=False)


def _opponent_channels(image: np.ndarray) -> list[np.ndarray]:
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        return [arr / 255.0 if np.issubdtype(np.asarray(image).dtype, np.integer) else arr]
    if np.issubdtype(np.asarray(image).dtype, np.integer):
        arr = arr / 255.0
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    intensity = to_gray(image)
    return [intensity, r - g, b - (r + g) / 2.0]


def predict_dog_contrast(
    image: np.ndarray,
    dog_scales: tuple[tuple[float, float], ...] | None = None,
) -> np.ndarray:
    """Center-surround contrast summed over intensity and color-opponent channels."""
    scales = dog_scales or ModelConfig().dog_scales
    for center, surround in scales:
        if surround <= center:
            raise BadScalePair(f"surround {surround} must exceed center {center}")
    channels = _opponent_channels(image)
    acc = np.zeros(channels[0].shape, dtype=np.float64)
    for ch in channels:
        for center, surround in scales:
            acc += np.abs(
                ndimage.gaussian_filter(ch, center) - ndimage.gaussian_filter(ch, surround)
            )
    return minmax_normalize(acc)


def load_external_map(path: str | Path, target_dims: tuple[int, int]) -> np.ndarray:
    """Read an exported saliency map and fit it to the stimulus grid.

    Accepts grayscale PNG (any resolution, resized bilinearly) or a flat
    row-major float32 file matching the target pixel count. Negative values
    are clamped to zero with a warning.
    """
    path = Path(path)
    if not path.exists():
        raise UnreadableMap(f"{path}: no such file")
    suffix = path.suffix.lower()
    try:
        if suffix in (".png", ".bmp", ".tif", ".tiff"):
            grid = load_map_png(path)
        else:
            grid = load_map_raw(path, target_dims)
    except UnreadableMap:
        raise
    except Exception as exc:
        raise UnreadableMap(f"{path}: {exc}") from exc
    if grid.shape != (target_dims[1], target_dims[0]):
        grid = resize_bilinear(grid, target_dims)
    n_negative = int((grid < 0).sum())
    if n_negative:
        warnings.warn(f"{path}: clamped {n_negative} negative values to 0", stacklevel=2)
        grid = np.clip(grid, 0.0, None)
    return grid


# --- registry -----------------------------------------------------------------

REGISTRY: dict[str, PredictorDescriptor] = {
    "center": PredictorDescriptor("center", Inspiration.BASELINE, global_scope=True),
    "sr": PredictorDescriptor("sr", Inspiration.SPECTRAL, global_scope=True),
    "pft": PredictorDescriptor("pft", Inspiration.SPECTRAL, global_scope=True),
    "dog": PredictorDescriptor("dog", Inspiration.COGNITIVE, global_scope=False,
                               local_scope=True),
}


def run_predictor(model_id: str, image: np.ndarray, config: ModelConfig = ModelConfig()) -> np.ndarray:
    if model_id == "center":
        h, w = np.asarray(image).shape[:2]
        return predict_center_gaussian((w, h), config.center_sigma_frac)
    if model_id == "sr":
        return predict_spectral_residual(image, config)
    if model_id == "pft":
        return predict_pft(image, config)
    if model_id == "dog":
        return predict_dog_contrast(image, config.dog_scales)
    raise KeyError(f"unknown model id {model_id!r}; registry has {sorted(REGISTRY)}")

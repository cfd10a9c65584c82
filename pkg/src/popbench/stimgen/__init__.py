"""Procedural pop-out stimulus generation with ground-truth region masks."""

from .blocks import BlockId, Task, all_blocks, all_subtypes, TOTAL_SUBTYPES
from .contrast import (
    DEFAULT_PSI_MAX,
    FeatureDelta,
    FeatureKind,
    KIND_RANGE,
    contrast_fraction,
    contrast_value,
    is_hard,
)
from .generator import (
    ElementRecord,
    GeneratorConfig,
    Stimulus,
    StimulusSpec,
    dataset_specs,
    generate_dataset,
    generate_stimulus,
    measured_feature_contrast,
)
from .layout import grid_pitch, jittered_grid, place_target
from .storage import load_manifest, load_stimulus_arrays, save_stimulus, write_manifest

__all__ = [
    "BlockId", "Task", "all_blocks", "all_subtypes", "TOTAL_SUBTYPES",
    "DEFAULT_PSI_MAX", "FeatureDelta", "FeatureKind", "KIND_RANGE",
    "contrast_fraction", "contrast_value", "is_hard",
    "ElementRecord", "GeneratorConfig", "Stimulus", "StimulusSpec",
    "dataset_specs", "generate_dataset", "generate_stimulus",
    "measured_feature_contrast",
    "grid_pitch", "jittered_grid", "place_target",
    "load_manifest", "load_stimulus_arrays", "save_stimulus", "write_manifest",
]

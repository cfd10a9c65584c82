import numpy as np
import pytest

from popbench.errors import RenderOverflow, UnknownPsi
from popbench.stimgen import (
    GeneratorConfig,
    StimulusSpec,
    all_subtypes,
    dataset_specs,
    generate_dataset,
    generate_stimulus,
    measured_feature_contrast,
)

# small canvas with proportional pixel density keeps the sweep fast
SMALL = dict(canvas_px=(320, 256), px_per_deg=10.0)


def _spec(block, subtype=1, psi=7, seed=0, **kw):
    return StimulusSpec(block=block, subtype=subtype, psi=psi, seed=seed, **kw)


def test_determinism_bit_identical():
    spec = _spec(11, seed=99)
    a = generate_stimulus(spec)
    b = generate_stimulus(spec)
    assert np.array_equal(a.image, b.image)
    assert np.array_equal(a.aoi_mask, b.aoi_mask)
    assert a.target_center == b.target_center


def test_different_seeds_differ():
    a = generate_stimulus(_spec(11, seed=1))
    b = generate_stimulus(_spec(11, seed=2))
    assert not np.array_equal(a.image, b.image)


@pytest.mark.parametrize("block,subtype", all_subtypes())
def test_stimulus_invariants_small_canvas(block, subtype):
    for psi in (1, 7):
        stim = generate_stimulus(_spec(block, subtype, psi, seed=5, **SMALL))
        h, w = stim.aoi_mask.shape
        assert stim.image.shape == (h, w, 3)
        assert (w, h) == SMALL["canvas_px"]
        n_set = stim.aoi_mask.sum()
        assert 1 <= n_set <= 0.25 * w * h
        cx, cy = (int(round(v)) for v in stim.target_center)
        assert stim.aoi_mask[cy, cx]
        if block >= 6:
            assert sum(e.is_target for e in stim.element_log) == 1


def test_mask_invariants_full_canvas_spot_checks():
    for block, subtype in ((11, 1), (6, 3), (4, 1), (8, 2)):
        stim = generate_stimulus(_spec(block, subtype, psi=7, seed=3))
        frac = stim.aoi_mask.mean()
        assert 0 < frac <= 0.25


def test_mask_covers_rendered_target():
    # block 11: the target bar is isolated, so any non-background pixel near
    # the target center must belong to the AOI
    stim = generate_stimulus(_spec(11, seed=21))
    cx, cy = (int(round(v)) for v in stim.target_center)
    r = 30
    window = stim.image[cy - r:cy + r, cx - r:cx + r]
    mask_win = stim.aoi_mask[cy - r:cy + r, cx - r:cx + r]
    non_bg = (window != 127).any(axis=2)
    assert non_bg.any()
    assert (non_bg <= mask_win).all()


@pytest.mark.parametrize("block,subtype", all_subtypes())
def test_measured_contrast_monotone(block, subtype):
    for seed in (11, 42):
        values = [
            measured_feature_contrast(
                generate_stimulus(_spec(block, subtype, psi, seed=seed, **SMALL))
            )
            for psi in range(1, 8)
        ]
        diffs = np.diff(values)
        assert (diffs >= -1e-9).all(), (block, subtype, seed, values)


@pytest.mark.parametrize("subtype", [3, 4])
def test_conjunction_target_unique(subtype):
    # scan: exactly one element differs from every other one in the
    # conjunction-defining feature pair
    stim = generate_stimulus(_spec(6, subtype, psi=7, seed=8))
    log = stim.element_log

    def pair_differs(a, b):
        hue_d = abs(a.feature_value - b.feature_value) % 360
        hue_d = min(hue_d, 360 - hue_d)
        if subtype == 3:
            ori_d = abs(a.orientation_deg - b.orientation_deg) % 180
            second = min(ori_d, 180 - ori_d) > 1.0
        else:
            second = abs(a.size_px - b.size_px) > 1.0
        return hue_d > 1.0 or second

    distinct = [e for e in log if all(pair_differs(e, o) for o in log if o is not e)]
    assert len(distinct) == 1
    assert distinct[0].is_target


def test_fixed_target_placement():
    spec = _spec(11, seed=4, target_xy=(400.0, 300.0))
    stim = generate_stimulus(spec)
    assert stim.target_center == (400.0, 300.0)
    target = next(e for e in stim.element_log if e.is_target)
    assert (target.x, target.y) == (400.0, 300.0)


def test_render_overflow_tiny_canvas():
    with pytest.raises(RenderOverflow):
        generate_stimulus(_spec(11, seed=0, canvas_px=(100, 80), px_per_deg=40.0))


def test_spec_validation():
    with pytest.raises(UnknownPsi):
        generate_stimulus(_spec(11, psi=0))
    with pytest.raises(RenderOverflow):
        generate_stimulus(StimulusSpec(block=11, psi=1, canvas_px=(0, 10)))


def test_dataset_grid_counts():
    assert len(dataset_specs(GeneratorConfig())) == 33 * 7 == 231
    assert len(dataset_specs(GeneratorConfig(
        psi_levels=list(range(1, 29)), psi_max=28))) == 33 * 28 == 924
    assert len(dataset_specs(GeneratorConfig(blocks=[9], psi_levels=[5, 6, 7]))) == 12


def test_dataset_seeds_order_independent():
    fwd = dataset_specs(GeneratorConfig(blocks=[9], psi_levels=[1, 7]))
    rev = dataset_specs(GeneratorConfig(blocks=[9], psi_levels=[7, 1]))
    seeds_fwd = {(s.block, s.subtype, s.psi): s.seed for s in fwd}
    seeds_rev = {(s.block, s.subtype, s.psi): s.seed for s in rev}
    assert seeds_fwd == seeds_rev


def test_dataset_generation_streams_and_ids():
    config = GeneratorConfig(blocks=[9], psi_levels=[5, 6, 7], **SMALL)
    stimuli = list(generate_dataset(config))
    assert len(stimuli) == 12
    assert sorted({s.image_id for s in stimuli}) == sorted(
        f"9_{sub}_{psi}" for sub in range(1, 5) for psi in (5, 6, 7)
    )


def test_dataset_failure_names_spec():
    config = GeneratorConfig(blocks=[11], psi_levels=[3],
                             canvas_px=(100, 80), px_per_deg=40.0)
    with pytest.raises(RenderOverflow, match="11_1_3"):
        list(generate_dataset(config))


def test_bad_psi_levels_rejected():
    with pytest.raises(UnknownPsi):
        dataset_specs(GeneratorConfig(psi_levels=[0, 1]))

import itertools
import math

import numpy as np
import pytest

import oracles
from popbench.errors import DimensionMismatch, EmptyShuffleSet, NoFixations
from popbench.metrics import (
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


def _fmap_from(coords, shape):
    grid = np.zeros(shape, dtype=np.int32)
    for y, x in coords:
        grid[y, x] += 1
    return grid


# --- AUC-Judd ---------------------------------------------------------------------

def test_auc_judd_perfect_ranking():
    s = np.zeros((8, 8))
    s[2, 3] = s[5, 5] = 1.0
    fmap = _fmap_from([(2, 3), (5, 5)], (8, 8))
    score = auc_judd(s, fmap)
    assert score.value >= 1.0 - 1.0 / 62.0
    assert score.n_positives == 2


def test_auc_judd_constant_map_is_chance():
    s = np.full((8, 8), 0.7)
    fmap = _fmap_from([(1, 1), (4, 4)], (8, 8))
    assert auc_judd(s, fmap).value == pytest.approx(0.5, abs=1e-12)


def test_auc_judd_matches_bruteforce_random_8x8():
    rng = np.random.default_rng(17)
    for _ in range(25):
        s = rng.random((8, 8))
        coords = [(rng.integers(0, 8), rng.integers(0, 8)) for _ in range(5)]
        fmap = _fmap_from(coords, (8, 8))
        ours = auc_judd(s, fmap).value
        ref = oracles.roc_auc_judd(s, fmap)
        assert ours == pytest.approx(ref, abs=1e-12)


def test_auc_judd_exhaustive_2x2():
    # every 2x2 saliency map over {0,1,2,3} x every fixation set of size 1..3
    cells = [(0, 0), (0, 1), (1, 0), (1, 1)]
    fixsets = [
        combo for size in (1, 2, 3) for combo in itertools.combinations(cells, size)
    ]
    n_checked = 0
    for values in itertools.product(range(4), repeat=4):
        s = np.asarray(values, dtype=float).reshape(2, 2)
        for fixset in fixsets:
            fmap = _fmap_from(fixset, (2, 2))
            if (fmap > 0).all():
                continue  # no negatives left
            ours = auc_judd(s, fmap).value
            ref = oracles.roc_auc_judd(s, fmap)
            assert ours == pytest.approx(ref, abs=1e-12), (values, fixset)
            n_checked += 1
    assert n_checked == 256 * 14  # C(4,1)+C(4,2)+C(4,3) fixation sets per map


def test_auc_judd_random_small_grids():
    rng = np.random.default_rng(99)
    for _ in range(400):
        h, w = rng.integers(2, 5), rng.integers(2, 5)
        s = rng.integers(0, 4, size=(h, w)).astype(float)
        n_fix = int(rng.integers(1, 4))
        coords = {(int(rng.integers(0, h)), int(rng.integers(0, w))) for _ in range(n_fix)}
        fmap = _fmap_from(coords, (h, w))
        if (fmap > 0).all():
            continue
        assert auc_judd(s, fmap).value == pytest.approx(
            oracles.roc_auc_judd(s, fmap), abs=1e-12)


def test_auc_judd_requires_fixations():
    with pytest.raises(NoFixations):
        auc_judd(np.random.default_rng(0).random((4, 4)), np.zeros((4, 4), dtype=int))


# --- AUC-Borji / sAUC ----------------------------------------------------------------

def test_auc_borji_perfect_map():
    s = np.zeros((16, 16))
    s[5, 5] = 1.0
    fmap = _fmap_from([(5, 5)], (16, 16))
    score = auc_borji(s, fmap, n_splits=100, n_samples=100,
                      rng=np.random.default_rng(1))
    assert score.value == pytest.approx(1.0, abs=0.01)


def test_auc_borji_constant_map():
    s = np.full((16, 16), 0.3)
    fmap = _fmap_from([(5, 5), (9, 2)], (16, 16))
    score = auc_borji(s, fmap, n_splits=100, n_samples=100,
                      rng=np.random.default_rng(2))
    assert score.value == pytest.approx(0.5, abs=0.02)


def test_auc_borji_reproducible():
    rng_map = np.random.default_rng(3)
    s = rng_map.random((12, 12))
    fmap = _fmap_from([(2, 2), (7, 9)], (12, 12))
    a = auc_borji(s, fmap, rng=np.random.default_rng(42)).value
    b = auc_borji(s, fmap, rng=np.random.default_rng(42)).value
    assert a == b


def test_sauc_indistinguishable_negatives():
    rng = np.random.default_rng(4)
    s = rng.random((64, 64))
    coords = [(int(rng.integers(0, 64)), int(rng.integers(0, 64))) for _ in range(2000)]
    fmap = _fmap_from(coords, (64, 64))
    # negatives drawn from the same uniform distribution as the positives
    negs = np.column_stack([rng.integers(0, 64, 8000), rng.integers(0, 64, 8000)])
    score = sauc(s, fmap, ShuffleSet(negs.astype(float)),
                 rng=np.random.default_rng(5), n_samples=4000)
    assert score.value == pytest.approx(0.5, abs=0.02)


def test_sauc_indicator_map():
    s = np.zeros((16, 16))
    pos = [(2, 2), (3, 12), (10, 5)]
    for y, x in pos:
        s[y, x] = 1.0
    fmap = _fmap_from(pos, (16, 16))
    negs = np.asarray([(x, y) for y in range(16) for x in range(16)
                       if (y, x) not in pos], dtype=float)
    score = sauc(s, fmap, ShuffleSet(negs))
    assert score.value >= 0.99


def test_sauc_matches_bruteforce_with_explicit_pool():
    rng = np.random.default_rng(6)
    s = rng.integers(0, 6, size=(8, 8)).astype(float)
    pos_coords = [(1, 1), (4, 6)]
    fmap = _fmap_from(pos_coords, (8, 8))
    neg_locs = [(x, y) for (y, x) in [(0, 7), (3, 3), (6, 2), (7, 7), (2, 5)]]
    score = sauc(s, fmap, ShuffleSet(np.asarray(neg_locs, dtype=float)),
                 n_samples=len(neg_locs))  # whole pool, deterministic
    pos_vals = [s[y, x] for y, x in pos_coords]
    neg_vals = [s[y, x] for x, y in neg_locs]
    assert score.value == pytest.approx(
        oracles.auc_from_values(pos_vals, neg_vals), abs=1e-12)


def test_sauc_empty_pool():
    with pytest.raises(EmptyShuffleSet):
        sauc(np.ones((4, 4)), _fmap_from([(1, 1)], (4, 4)),
             ShuffleSet(np.empty((0, 2))))


# --- NSS / CC / SIM / KL / InfoGain ---------------------------------------------------

def test_nss_hand_case():
    s = np.array([[2.0, 0.0], [0.0, 0.0]])
    fmap = _fmap_from([(0, 0)], (2, 2))
    # (2 - 0.5) / sqrt(0.75) = 1.7320508
    assert nss(s, fmap).value == pytest.approx(1.7320508, abs=1e-4)


def test_nss_constant_map_zero():
    s = np.full((6, 6), 3.0)
    assert nss(s, _fmap_from([(2, 2)], (6, 6))).value == 0.0


def test_nss_positive_on_own_density():
    from popbench.fixdata import density_map, DensityParams
    fmap = _fmap_from([(8, 8), (20, 20)], (32, 32))
    dens = density_map(fmap, DensityParams(sigma_deg=1.0, px_per_deg=3.0))
    assert nss(dens, fmap).value > 0


def test_nss_matches_oracle_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        s = rng.random((8, 8))
        coords = [(int(rng.integers(0, 8)), int(rng.integers(0, 8))) for _ in range(3)]
        fmap = _fmap_from(coords, (8, 8))
        assert nss(s, fmap).value == pytest.approx(
            oracles.nss_direct(s, fmap), abs=1e-9)


def test_cc_identity_and_negation():
    rng = np.random.default_rng(8)
    d = rng.random((6, 6))
    assert cc(d, d).value == pytest.approx(1.0, abs=1e-12)
    assert cc(1.0 - d, d).value == pytest.approx(-1.0, abs=1e-12)


def test_cc_matches_oracle_hand():
    s = np.arange(16, dtype=float).reshape(4, 4) ** 1.3
    d = np.asarray([[0.1, 0.4, 0.2, 0.3]] * 4)
    assert cc(s, d).value == pytest.approx(oracles.cc_direct(s, d), abs=1e-12)


def test_sim_identity_disjoint_and_hand():
    d = np.random.default_rng(9).random((5, 5)) + 0.1
    assert sim(d, d).value == pytest.approx(1.0, abs=1e-12)
    a = np.zeros((4, 4)); a[0, 0] = 1.0
    b = np.zeros((4, 4)); b[3, 3] = 1.0
    assert sim(a, b).value == 0.0
    s = np.asarray([[1.0, 2.0, 0.5], [0.0, 1.0, 3.0], [2.0, 0.0, 1.0]])
    d3 = np.asarray([[0.5, 1.0, 1.0], [1.0, 0.0, 2.0], [0.5, 2.0, 1.0]])
    assert sim(s, d3).value == pytest.approx(oracles.sim_direct(s, d3), abs=1e-12)


def test_kl_identical_small():
    d = np.random.default_rng(10).random((8, 8)) + 0.2
    assert abs(kl(d, d).value) <= 1e-5


def test_kl_diverges_where_saliency_missing():
    s = np.full((8, 8), 1e-12)
    s[0, 0] = 1.0
    d = np.zeros((8, 8))
    d[7, 7] = 1.0
    big = kl(s, d, epsilon=1e-7).value
    bigger = kl(s, d, epsilon=1e-9).value
    assert big > 5.0
    assert bigger > big


def test_kl_matches_oracle_hand():
    s = np.asarray([[1.0, 2.0, 0.5], [0.5, 1.0, 3.0], [2.0, 0.5, 1.0]])
    d = np.asarray([[0.5, 1.0, 1.0], [1.0, 0.5, 2.0], [0.5, 2.0, 1.0]])
    assert kl(s, d).value == pytest.approx(oracles.kl_direct(s, d), abs=1e-12)


def test_info_gain_zero_against_self():
    rng = np.random.default_rng(11)
    s = rng.random((8, 8)) + 0.1
    fmap = _fmap_from([(2, 5), (6, 1)], (8, 8))
    assert info_gain(s, fmap, s).value == 0.0


def test_info_gain_density_beats_uniform():
    from popbench.fixdata import density_map, DensityParams
    fmap = _fmap_from([(10, 10), (11, 12)], (24, 24))
    dens = density_map(fmap, DensityParams(sigma_deg=1.0, px_per_deg=2.0))
    uniform = np.ones((24, 24))
    assert info_gain(dens, fmap, uniform).value > 0


def test_info_gain_matches_oracle():
    rng = np.random.default_rng(12)
    for _ in range(50):
        s = rng.random((8, 8)) + 0.01
        b = rng.random((8, 8)) + 0.01
        coords = [(int(rng.integers(0, 8)), int(rng.integers(0, 8))) for _ in range(3)]
        fmap = _fmap_from(coords, (8, 8))
        assert info_gain(s, fmap, b).value == pytest.approx(
            oracles.infogain_direct(s, fmap, b), abs=1e-12)


# --- saliency index -------------------------------------------------------------------

def test_si_uniform_map_zero():
    mask = np.zeros((10, 10), dtype=bool)
    mask[2:5, 2:5] = True
    assert saliency_index(np.full((10, 10), 0.4), mask).value == pytest.approx(0.0, abs=1e-12)


def test_si_formula_hand_case():
    mask = np.zeros((8, 8), dtype=bool)
    mask[:4] = True
    s = np.where(mask, 0.75, 0.25)
    assert saliency_index(s, mask).value == pytest.approx(2.0, abs=1e-12)


def test_si_degenerate_background_sentinel():
    mask = np.zeros((6, 6), dtype=bool)
    mask[1:3, 1:3] = True
    s = np.where(mask, 1.0, 0.0)
    assert math.isinf(saliency_index(s, mask).value)


def test_si_rejects_degenerate_mask():
    with pytest.raises(ValueError):
        saliency_index(np.ones((4, 4)), np.ones((4, 4), dtype=bool))
    with pytest.raises(ValueError):
        saliency_index(np.ones((4, 4)), np.zeros((4, 4), dtype=bool))


def test_si_matches_oracle_random():
    rng = np.random.default_rng(13)
    for _ in range(100):
        s = rng.random((8, 8))
        mask = rng.random((8, 8)) > 0.6
        if not mask.any() or mask.all():
            continue
        assert saliency_index(s, mask).value == pytest.approx(
            oracles.si_direct(s, mask), abs=1e-9)


# --- invariances ------------------------------------------------------------------------

def test_auc_rank_invariance():
    rng = np.random.default_rng(14)
    for _ in range(50):
        s = rng.random((8, 8))
        coords = [(int(rng.integers(0, 8)), int(rng.integers(0, 8))) for _ in range(3)]
        fmap = _fmap_from(coords, (8, 8))
        base = auc_judd(s, fmap).value
        assert auc_judd(s**2, fmap).value == pytest.approx(base, abs=1e-9)
        assert auc_judd(np.exp(s), fmap).value == pytest.approx(base, abs=1e-9)


def test_nss_affine_invariance():
    rng = np.random.default_rng(15)
    for _ in range(50):
        s = rng.random((8, 8))
        fmap = _fmap_from([(int(rng.integers(0, 8)), int(rng.integers(0, 8)))], (8, 8))
        a, b = float(rng.uniform(0.1, 5.0)), float(rng.uniform(-2.0, 2.0))
        assert nss(a * s + b, fmap).value == pytest.approx(
            nss(s, fmap).value, abs=1e-9)


def test_si_scale_invariance():
    rng = np.random.default_rng(16)
    for _ in range(50):
        s = rng.random((8, 8))
        mask = np.zeros((8, 8), dtype=bool)
        mask[2:4, 3:6] = True
        a = float(rng.uniform(0.1, 10.0))
        assert saliency_index(a * s, mask).value == pytest.approx(
            saliency_index(s, mask).value, abs=1e-9)


def test_cc_affine_invariance():
    rng = np.random.default_rng(18)
    for _ in range(50):
        s = rng.random((8, 8))
        d = rng.random((8, 8))
        a = float(rng.uniform(0.1, 5.0))
        b = float(rng.uniform(-1.0, 1.0))
        assert cc(a * s + b, d).value == pytest.approx(cc(s, d).value, abs=1e-9)


def test_kl_nonnegative_up_to_epsilon_bias():
    rng = np.random.default_rng(19)
    for _ in range(50):
        s = rng.random((8, 8)) + 0.01
        d = rng.random((8, 8)) + 0.01
        assert kl(s, d).value >= -1e-4


def test_saliency_map_resized_to_reference():
    # half-resolution map is upsampled before scoring
    s_small = np.zeros((4, 4))
    s_small[1, 1] = 1.0
    fmap = _fmap_from([(2, 2)], (8, 8))
    score = auc_judd(s_small, fmap)
    assert 0.0 <= score.value <= 1.0


def test_saliency_map_must_be_2d():
    fmap = _fmap_from([(1, 1)], (4, 4))
    with pytest.raises(DimensionMismatch):
        auc_judd(np.zeros((4, 4, 3)), fmap)

import numpy as np
import pytest

from faircache.subsets import (card, mask_of, member_matrix, member_max,
                               member_sums, members_of, popcounts,
                               weighted_subset_sums, weighted_superset_sums)


def test_mask_roundtrip():
    # user ids are 1-based, bit k-1 carries user k
    assert mask_of([1, 3, 6]) == 0b100101
    assert members_of(0b100101) == (1, 3, 6)
    assert members_of(0) == ()
    assert card(0b1011) == 3


def test_popcounts_matches_python():
    pc = popcounts(5)
    assert pc.shape == (32,)
    for mask in range(32):
        assert pc[mask] == bin(mask).count("1")


def test_member_matrix_shape_and_content():
    mm = member_matrix(3)
    assert mm.shape == (8, 3)
    for mask in range(8):
        for j in range(3):
            assert mm[mask, j] == bool(mask >> j & 1)


def test_member_sums_and_max():
    rng = np.random.default_rng(0)
    x = rng.random(4)
    sums = member_sums(x)
    mx = member_max(x, empty=-1.0)
    for mask in range(16):
        sel = [x[u - 1] for u in members_of(mask)]
        assert sums[mask] == pytest.approx(sum(sel))
        assert mx[mask] == pytest.approx(max(sel) if sel else -1.0)


def test_weighted_subset_sums_brute_force():
    rng = np.random.default_rng(1)
    y = rng.random(16)
    y[0] = 0.0
    w = 0.4
    out = weighted_subset_sums(y, w)
    assert out[0] == 0.0
    for mask in range(1, 16):
        total = 0.0
        for sub in range(1, 16):
            if (sub & mask) == sub:
                total += y[sub] * w ** card(mask & ~sub)
        assert out[mask] == pytest.approx(total, rel=1e-12)


def test_weighted_superset_sums_brute_force():
    rng = np.random.default_rng(2)
    y = rng.random(16)
    w = 0.7
    out = weighted_superset_sums(y, w)
    for mask in range(1, 16):
        total = 0.0
        for sup in range(1, 16):
            if (sup & mask) == mask:
                total += y[sup] * w ** card(sup & ~mask)
        assert out[mask] == pytest.approx(total, rel=1e-12)


def test_plain_zeta_special_case():
    y = np.arange(8, dtype=float)
    y[0] = 0.0
    out = weighted_subset_sums(y, 1.0)
    for mask in range(8):
        assert out[mask] == sum(y[s] for s in range(8) if (s & mask) == s)

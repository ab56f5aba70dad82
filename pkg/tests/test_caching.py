import math

import numpy as np
import pytest

from faircache.caching import (CacheParams, codeword_load, delivery_target_bits,
                               enumerate_segments, segment_sizes,
                               subfile_fraction, total_load)
from faircache.subsets import card, mask_of, members_of

from oracles import mc_segment_loads


def test_subfile_fraction_normalises():
    # the 2^K cache patterns of a single file partition it
    for k in (2, 3, 5):
        total = sum(subfile_fraction(0.3, k, s) * math.comb(k, s)
                    for s in range(k + 1))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_codeword_load_closed_form():
    m = 0.25
    served = 0b1011
    # |I| = 2 inside a 3-set: m^1 (1-m)^2
    assert codeword_load(m, served, 0b0011) == pytest.approx(m * (1 - m) ** 2)
    # per-user mass: everything useful to one member sums to (1-m)
    for k in members_of(served):
        mass = sum(codeword_load(m, served, i) for i in range(1, 16)
                   if (i & served) == i and i >> (k - 1) & 1)
        assert mass == pytest.approx(1 - m, abs=1e-12)


def test_codeword_load_rejects_bad_sets():
    with pytest.raises(ValueError):
        codeword_load(0.5, 0b011, 0b100)   # not a subset
    with pytest.raises(ValueError):
        codeword_load(0.5, 0b011, 0)       # empty


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("m", [0.3, 0.5, 0.6])
def test_placement_monte_carlo(k, m):
    served = (1 << k) - 1
    est = mc_segment_loads(k, m, served, file_bits=10 ** 5)
    for mask, bits in est.items():
        nominal = codeword_load(m, served, mask) * 10 ** 5
        assert bits == pytest.approx(nominal, rel=0.02)


def test_pair_combination_routes_only_inside_the_pair():
    # three users, files of the first two combined: queues {1}, {2}, {1,2}
    # receive mass, nothing involving the third user does
    pair = mask_of([1, 2])
    est = mc_segment_loads(3, 0.5, pair, file_bits=10 ** 4)
    assert set(est) == {0b01, 0b10, 0b11}
    segs = enumerate_segments(pair, CacheParams(0.5, 10 ** 4))
    assert {s.useful_to for s in segs} == {0b01, 0b10, 0b11}


def test_total_load_reference_point():
    # 30 users, caches holding a third of the library
    load = total_load(1 / 3, 30)
    assert 1.999 <= load <= 2.0
    uncoded = 30 * (1 - 1 / 3)
    assert uncoded == pytest.approx(20.0, abs=1e-9)
    assert uncoded / load >= 9.99


def test_total_load_small_k_by_summation():
    m, k = 0.4, 5
    direct = sum(codeword_load(m, (1 << k) - 1, i) for i in range(1, 1 << k))
    assert total_load(m, k) == pytest.approx(direct, rel=1e-12)


def test_segment_sizes_sum_to_residual():
    params = CacheParams(0.37, 997)
    for group in (1, 2, 3, 4):
        sizes = segment_sizes(params.memory_fraction, params.file_bits, group)
        per_user = sum(math.comb(group - 1, c - 1) * s
                       for c, s in enumerate(sizes, start=1))
        assert per_user == delivery_target_bits(params)


def test_segment_sizes_even_split():
    # memory half the library, 800-bit files, three users: every segment of
    # the full combination carries exactly 100 bits
    segs = enumerate_segments(0b111, CacheParams(0.5, 800))
    assert len(segs) == 7
    assert all(s.bits == 100 for s in segs)


def test_enumerate_segments_covers_each_member():
    params = CacheParams(0.6, 1000)
    served = 0b1101
    segs = enumerate_segments(served, params)
    target = delivery_target_bits(params)
    for k in members_of(served):
        got = sum(s.bits for s in segs if s.useful_to >> (k - 1) & 1)
        assert got == target
    assert all(s.useful_to & served == s.useful_to for s in segs)
    assert all(card(s.useful_to) >= 1 for s in segs)

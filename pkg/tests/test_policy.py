import numpy as np
import pytest

from faircache.caching import CacheParams, codeword_load
from faircache.channel import ChannelParams, FadingProcess
from faircache.policy import (PolicyParams, QueueState, admission,
                              codeword_backlog, combination_command, decide,
                              nominal_inflow, nominal_segment_loads, step,
                              utility, virtual_arrival)


def make_params(**kw):
    base = dict(fairness_alpha=1.0, v=10.0, domain_shift=0.01, admit_cap=2.0,
                combine_cap=1)
    base.update(kw)
    return PolicyParams(**base)


def test_utility_frozen_values():
    assert utility(0.01, 2.0, 1.0) == pytest.approx(-1.0 / 1.01, rel=1e-12)
    assert utility(0.0, 1.0, 0.05) == 0.0
    assert utility(0.05, 1.0, 0.05) == pytest.approx(np.log(2.0), rel=1e-12)
    # alpha = 0 is throughput up to the constant shift
    assert utility(0.3, 0.0, 0.05) - utility(0.0, 0.0, 0.05) \
        == pytest.approx(0.3, rel=1e-12)


def test_utility_concavity_and_monotonicity():
    xs = np.linspace(0.0, 3.0, 50)
    for alpha in (0.0, 0.5, 1.0, 2.0):
        g = utility(xs, alpha, 0.05)
        assert np.all(np.diff(g) > 0)
        if alpha > 0:
            assert np.all(np.diff(np.diff(g)) < 1e-12)


def test_virtual_arrival_closed_forms():
    params = make_params(fairness_alpha=1.0, v=100.0, domain_shift=0.01,
                         admit_cap=2.0)
    # interior stationary point V/U - d = 3.99 caps at 2
    got = virtual_arrival(np.array([25.0, 1e6, 0.0]), params)
    assert got[0] == pytest.approx(2.0)
    assert got[1] == pytest.approx(0.0, abs=1e-4)
    assert got[2] == pytest.approx(2.0)  # U = 0 saturates
    uncapped = make_params(fairness_alpha=1.0, v=100.0, domain_shift=0.01,
                           admit_cap=100.0)
    assert virtual_arrival(np.array([25.0]), uncapped)[0] \
        == pytest.approx(3.99, rel=1e-12)


def test_virtual_arrival_bang_bang_at_alpha_zero():
    params = make_params(fairness_alpha=0.0, v=10.0, admit_cap=1.5)
    got = virtual_arrival(np.array([9.0, 10.0, 11.0]), params)
    assert list(got) == [1.5, 1.5, 0.0]


def test_admission_gate():
    params = make_params(admit_cap=2.0)
    a = admission(np.array([5.0, 5.0, 5.0]), np.array([4.0, 5.0, 6.0]), params)
    assert list(a) == [0.0, 2.0, 2.0]


def test_codeword_backlog_small_case():
    # two users, m = 1/2, F = 100: backlog_J = sum_{I in J} b(J,I) Q_I / F
    cache = CacheParams(0.5, 100)
    q = np.array([0.0, 200.0, 200.0, 500.0])
    backlog = codeword_backlog(q, cache)
    assert backlog[0b01] == pytest.approx(0.5 * 2.0)
    assert backlog[0b11] == pytest.approx(0.25 * (2.0 + 2.0) + 0.25 * 5.0)
    brute = sum(codeword_load(0.5, 0b11, i) * q[i] / 100.0 for i in (1, 2, 3))
    assert backlog[0b11] == pytest.approx(brute, rel=1e-12)


def test_combination_fires_on_strict_margin():
    cache = CacheParams(0.5, 100)
    params = make_params(combine_cap=1)
    q = np.array([0.0, 200.0, 200.0, 500.0])
    sigma, margins = combination_command(np.array([3.0, 3.0]), q, params, cache)
    assert margins[0b11] == pytest.approx(6.0 - 2.25)
    assert sigma[0b01] == 1.0 and sigma[0b10] == 1.0 and sigma[0b11] == 1.0
    # exact equality must not fire
    level = codeword_backlog(q, cache)[0b11] / 2.0
    sigma2, margins2 = combination_command(np.array([level, level]), q,
                                           params, cache)
    assert margins2[0b11] == pytest.approx(0.0, abs=1e-12)
    assert sigma2[0b11] == 0.0


def test_combination_idle_on_empty_files():
    cache = CacheParams(0.6, 1000)
    sigma, _ = combination_command(np.zeros(3), np.zeros(8), make_params(),
                                   cache)
    assert np.all(sigma == 0.0)


def test_nominal_inflow_matches_direct_sum():
    cache = CacheParams(0.5, 100)
    sigma = np.zeros(4)
    sigma[0b11] = 1.0
    inflow = nominal_inflow(sigma, cache)
    assert inflow[0b01] == pytest.approx(25.0)
    assert inflow[0b10] == pytest.approx(25.0)
    assert inflow[0b11] == pytest.approx(25.0)
    # stacking a singleton command adds its full residual
    sigma[0b01] = 1.0
    inflow = nominal_inflow(sigma, cache)
    assert inflow[0b01] == pytest.approx(25.0 + 50.0)


def test_nominal_inflow_agrees_with_segment_loads():
    cache = CacheParams(0.37, 1000)
    for served in (0b101, 0b111, 0b1111):
        sigma = np.zeros(16)
        sigma[served] = 1.0
        inflow = nominal_inflow(sigma, cache)
        direct = np.zeros(16)
        for mask, bits in nominal_segment_loads(served, cache):
            direct[mask] += bits
        assert np.allclose(inflow, direct, rtol=1e-12)


def test_advance_keeps_counters_nonnegative():
    rng = np.random.default_rng(3)
    cache = CacheParams(0.6, 1000)
    params = make_params(fairness_alpha=1.0, v=3.0, domain_shift=0.05,
                         admit_cap=1.0)
    state = QueueState.zeros(3)
    chan = ChannelParams(num_users=3, pathloss=(1.0, 0.5, 0.2), power=10.0,
                         slot_length=100)
    fading = FadingProcess(chan, seed=5)
    for _ in range(2000):
        state, dec = step(state, fading.sample(), chan.power,
                          chan.slot_length, params, cache)
        assert np.all(state.user_files >= 0)
        assert np.all(state.codeword_bits >= 0)
        assert np.all(state.virtual >= 0)
        assert state.codeword_bits[0] == 0.0
        assert np.all(dec.sigma[dec.margins <= 0.0] == 0.0)


def test_counter_loop_stays_bounded():
    # closed loop on the counters alone: a stable configuration's totals
    # plateau rather than growing through the horizon
    cache = CacheParams(0.6, 1000)
    params = make_params(fairness_alpha=0.0, v=3.0, admit_cap=1.0)
    chan = ChannelParams(num_users=4, pathloss=(1.0, 1.0, 0.2, 0.2),
                         power=10.0, slot_length=100)
    fading = FadingProcess(chan, seed=6)
    state = QueueState.zeros(4)
    totals = np.empty(20_000)
    for t in range(len(totals)):
        state, _ = step(state, fading.sample(), chan.power, chan.slot_length,
                        params, cache)
        totals[t] = (state.user_files.sum() + state.virtual.sum()
                     + state.codeword_bits.sum() / cache.file_bits)
    first = totals[10_000:15_000].mean()
    second = totals[15_000:].mean()
    assert second <= 1.1 * first


def test_decide_is_pure():
    cache = CacheParams(0.6, 1000)
    params = make_params()
    state = QueueState(user_files=np.array([2.0, 1.0]),
                       codeword_bits=np.array([0.0, 50.0, 10.0, 500.0]),
                       virtual=np.array([4.0, 9.0]))
    before = state.copy()
    decide(state, np.array([1.0, 0.3]), 10.0, params, cache)
    assert np.array_equal(state.user_files, before.user_files)
    assert np.array_equal(state.codeword_bits, before.codeword_bits)
    assert np.array_equal(state.virtual, before.virtual)

"""Independent reference implementations used only by the tests.

Everything here is deliberately brute force: bit-level Monte Carlo for the
placement statistics, simplex grids for the power allocation, and plain
subset loops for the weight reduction.  The point is to check the closed
forms and the exact solver against code that shares none of their structure.
"""

import itertools

import numpy as np

from faircache.subsets import members_of


# ---------------------------------------------------------------------------
# bit-level placement


def mc_segment_loads(num_users: int, memory_fraction: float, served: int,
                     file_bits: int, seed: int = 12) -> dict:
    """Estimate the per-queue bit mass created by combining the files of the
    set `served`, by sampling the random placement one bit at a time.

    Each user caches each bit of every file independently with probability
    `memory_fraction`.  A needed bit of user k's file whose within-`served`
    cache pattern is T lands in the segment addressed to T | {k}; segment
    lengths are averaged over the members so the result is directly
    comparable with the nominal per-queue loads.
    """
    rng = np.random.default_rng(seed)
    users = members_of(served)
    loads = {}
    for k in users:
        # placement of user k's file at every member of `served`
        cached = rng.random((len(users), file_bits)) < memory_fraction
        k_row = users.index(k)
        needed = ~cached[k_row]
        pattern = np.zeros(file_bits, dtype=np.int64)
        for row, user in enumerate(users):
            if user != k:
                pattern |= cached[row].astype(np.int64) << (user - 1)
        pattern |= 1 << (k - 1)
        masks, counts = np.unique(pattern[needed], return_counts=True)
        for mask, count in zip(masks, counts):
            loads[int(mask)] = loads.get(int(mask), 0.0) + float(count)
    # average the |I| per-member estimates of each segment length
    return {mask: bits / len(members_of(mask)) for mask, bits in loads.items()}


# ---------------------------------------------------------------------------
# power allocation


_GRIDS: dict = {}


def _simplex_grid(k: int, step: float) -> np.ndarray:
    """All (n_points, k) fraction vectors with entries on a `step` lattice
    summing to one."""
    key = (k, step)
    grid = _GRIDS.get(key)
    if grid is None:
        n = int(round(1.0 / step))
        rows = [np.diff((-1,) + comp + (n + k - 1,)) - 1
                for comp in itertools.combinations(range(n + k - 1), k - 1)]
        grid = np.asarray(rows, dtype=float) / n
        _GRIDS[key] = grid
    return grid


def grid_power_objective(gains: np.ndarray, theta_tilde: np.ndarray,
                         power: float, step: float = 0.01) -> float:
    """Best objective over power splits on a simplex grid.

    `gains` must already be sorted in decreasing order and `theta_tilde` is
    the per-level reduced weight (index 0 = strongest user's level).
    """
    alpha = _simplex_grid(len(gains), step)
    depth = power * np.cumsum(alpha, axis=1)
    levels = np.log2(1.0 + gains[None, :] * depth)
    rates = np.diff(levels, axis=1, prepend=0.0)
    return float(np.max(rates @ np.asarray(theta_tilde, dtype=float)))


def brute_reduced_weights(gains: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Per-level maximum weight by scanning every subset.

    Level of a subset is the sorted rank of its weakest member; ranks follow
    a stable decreasing sort of `gains`.
    """
    k = len(gains)
    order = np.argsort(-gains, kind="stable")
    rank = np.empty(k, dtype=np.int64)
    rank[order] = np.arange(k)
    out = np.zeros(k)
    for mask in range(1, 1 << k):
        level = max(rank[u - 1] for u in members_of(mask))
        if theta[mask] > out[level]:
            out[level] = theta[mask]
    return out

"""Degraded Gaussian broadcast channel: region test and weighted-rate maximization.

With users sorted by decreasing gain, superposition coding with power
fractions alpha (cumulative A_p = P * sum of the strongest p fractions) and
successive decoding supports any multicast rate tuple (one rate per nonempty
user subset) satisfying, per sorted position p,

    sum of R_I over subsets whose weakest member sits at position p
        <= log2( (1 + h_p A_p) / (1 + h_p A_{p-1}) ).

The "level" of a subset is that weakest-member position: a multicast stream
is decodable by everyone in the subset iff it is encoded at the level of its
weakest member.  Maximizing a weighted sum of subset rates therefore
collapses to per-level scalar weights theta_tilde (the best admissible subset
weight per level) followed by an exact one-dimensional power sweep: the
marginal value of transmit power at depth z is theta_tilde_k / (1/h_k + z)
for whichever level k claims it, each level's claim region is an interval,
and interval boundaries are hyperbola crossings, so the optimum is found by
sorting the O(K^2) crossings instead of iterating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subsets import member_max, popcounts


def gain_order(gains: np.ndarray) -> np.ndarray:
    """User indices (0-based) sorted by decreasing gain, ties by index."""
    return np.argsort(-np.asarray(gains, dtype=float), kind="stable")


def subset_levels(gains: np.ndarray, order: np.ndarray | None = None) -> np.ndarray:
    """Level of every mask: sorted position of its weakest member.

    Masks containing a zero-gain user get a level >= the number of
    positive-gain users (they cannot carry rate); the empty mask gets -1.
    """
    gains = np.asarray(gains, dtype=float)
    if order is None:
        order = gain_order(gains)
    rank = np.empty(len(gains))
    rank[order] = np.arange(len(gains))
    return member_max(rank, empty=-1.0).astype(np.int64)


@dataclass(frozen=True)
class ReducedWeights:
    """Per-level reduction of subset weights."""

    order: np.ndarray        # user indices by decreasing gain
    theta_tilde: np.ndarray  # (K,) best admissible subset weight per level
    argmax_mask: np.ndarray  # (K,) mask attaining it (smallest size, then mask)


def reduce_weights(theta: np.ndarray, gains: np.ndarray) -> ReducedWeights:
    """Collapse subset weights to one weight per sorted user position.

    Level p may carry any subset whose weakest member is the p-th strongest
    user, so theta_tilde[p] is the max weight among those subsets.  Ties pick
    the smallest subset, then the smallest mask, which keeps the schedule
    deterministic and invariant to rescaling all weights.
    """
    gains = np.asarray(gains, dtype=float)
    theta = np.asarray(theta, dtype=float)
    num_users = len(gains)
    if len(theta) != (1 << num_users):
        raise ValueError("theta must have one entry per subset mask")
    if theta[0] != 0.0:
        theta = theta.copy()
        theta[0] = 0.0
    order = gain_order(gains)
    levels = subset_levels(gains, order)
    masks = np.arange(1 << num_users)
    by_pref = np.lexsort((masks, popcounts(num_users), -theta, levels))
    level_sorted = levels[by_pref]
    present, first = np.unique(level_sorted, return_index=True)
    theta_tilde = np.zeros(num_users)
    argmax_mask = np.zeros(num_users, dtype=np.int64)
    n_pos = int(np.count_nonzero(gains > 0))
    for lvl, idx in zip(present, first):
        if 0 <= lvl < n_pos:
            best = by_pref[idx]
            theta_tilde[lvl] = theta[best]
            argmax_mask[lvl] = best
    return ReducedWeights(order=order, theta_tilde=theta_tilde, argmax_mask=argmax_mask)


@dataclass(frozen=True)
class PowerAllocation:
    """Solution of the per-level weighted-rate problem on sorted users."""

    alpha: np.ndarray  # power fractions by sorted position, sums to 1 if active
    rates: np.ndarray  # bits per channel use by sorted position
    lam: float         # water level max_k theta_tilde_k / (1/h_k + P)


def solve_power_allocation(gains_sorted: np.ndarray, power: float,
                           theta_tilde: np.ndarray) -> PowerAllocation:
    """Exact argmax of sum theta_tilde_p * R_p over the power simplex.

    Expects strictly positive gains in non-increasing order.  The marginal
    value of power depth z in [0, P] is f_p(z) = theta_tilde_p / (1/h_p + z);
    the pointwise argmax partitions [0, P] into at most K intervals whose
    endpoints are pairwise hyperbola crossings, and each level's power share
    is the length of its interval.
    """
    h = np.asarray(gains_sorted, dtype=float)
    th = np.asarray(theta_tilde, dtype=float)
    if len(h) != len(th):
        raise ValueError("gains and weights must have equal length")
    if np.any(h <= 0):
        raise ValueError("gains must be strictly positive")
    if np.any(np.diff(h) > 0):
        raise ValueError("gains must be sorted in non-increasing order")
    if np.any(th < 0):
        raise ValueError("weights must be nonnegative")
    if power <= 0:
        raise ValueError("power must be positive")

    n = len(h)
    alpha = np.zeros(n)
    rates = np.zeros(n)
    active = np.flatnonzero(th > 0)
    if len(active) == 0:
        return PowerAllocation(alpha=alpha, rates=rates, lam=0.0)

    cost = 1.0 / h
    cuts = [0.0, float(power)]
    for a, i in enumerate(active):
        for j in active[a + 1:]:
            if th[i] == th[j]:
                continue  # parallel hyperbolas, dominance never flips
            z = (th[i] * cost[j] - th[j] * cost[i]) / (th[j] - th[i])
            if 0.0 < z < power:
                cuts.append(float(z))
    cuts = sorted(set(cuts))
    for z0, z1 in zip(cuts[:-1], cuts[1:]):
        zm = 0.5 * (z0 + z1)
        winner = active[int(np.argmax(th[active] / (cost[active] + zm)))]
        alpha[winner] += (z1 - z0) / power

    depth = power * np.cumsum(alpha)
    edges = np.log2(1.0 + h * depth)
    prev = np.log2(1.0 + h * np.concatenate(([0.0], depth[:-1])))
    rates = edges - prev
    lam = float(np.max(th[active] / (cost[active] + power)))
    return PowerAllocation(alpha=alpha, rates=rates, lam=lam)


@dataclass(frozen=True)
class RateAllocation:
    """One slot's multicast schedule: rates per subset plus the power split."""

    order: np.ndarray        # user indices by decreasing gain
    alpha: np.ndarray        # (K,) power fractions by sorted position
    level_rates: np.ndarray  # (K,) bits per channel use by sorted position
    mu: np.ndarray           # (2**K,) bits per channel use by subset mask
    objective: float         # sum over masks of theta * mu


def max_weighted_rate(gains: np.ndarray, power: float,
                      theta: np.ndarray) -> RateAllocation:
    """Best rate tuple in the region for subset weights theta.

    Zero-gain users are excluded (subsets containing one carry no rate), and
    an all-zero weight vector yields the idle allocation.  Each level's rate
    goes entirely to that level's best-weight subset.
    """
    gains = np.asarray(gains, dtype=float)
    if np.any(gains < 0):
        raise ValueError("gains must be nonnegative")
    num_users = len(gains)
    red = reduce_weights(theta, gains)
    n_pos = int(np.count_nonzero(gains > 0))
    alpha = np.zeros(num_users)
    level_rates = np.zeros(num_users)
    mu = np.zeros(1 << num_users)
    if n_pos > 0:
        h_sorted = gains[red.order[:n_pos]]
        pa = solve_power_allocation(h_sorted, power, red.theta_tilde[:n_pos])
        alpha[:n_pos] = pa.alpha
        level_rates[:n_pos] = pa.rates
        for p in range(n_pos):
            if pa.rates[p] > 0.0:
                mu[red.argmax_mask[p]] += pa.rates[p]
    theta = np.asarray(theta, dtype=float)
    objective = float(mu @ theta) if len(theta) == len(mu) else 0.0
    return RateAllocation(order=red.order, alpha=alpha, level_rates=level_rates,
                          mu=mu, objective=objective)


def region_contains(gains: np.ndarray, power: float, rates: np.ndarray,
                    alpha: np.ndarray, tol: float = 1e-9) -> bool:
    """Check a subset rate tuple against the region cut by power fractions.

    `rates` is indexed by subset mask; `alpha` lists power fractions by
    sorted position (strongest first) and must sum to at most one.  Per
    sorted position the summed rate of all subsets at that level must not
    exceed the superposition increment it affords.
    """
    gains = np.asarray(gains, dtype=float)
    rates = np.asarray(rates, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    num_users = len(gains)
    if len(rates) != (1 << num_users) or len(alpha) != num_users:
        raise ValueError("rates must be per-mask and alpha per sorted position")
    if np.any(rates < -tol) or np.any(alpha < -tol):
        return False
    if alpha.sum() > 1.0 + tol:
        return False
    if rates[0] > tol:
        return False

    order = gain_order(gains)
    levels = subset_levels(gains, order)
    n_pos = int(np.count_nonzero(gains > 0))
    per_level = np.bincount(levels + 1, weights=rates,
                            minlength=num_users + 1)[1:]
    if np.any(per_level[n_pos:] > tol):
        return False  # rate on a subset with a zero-gain member
    if n_pos == 0:
        return True
    h_sorted = gains[order[:n_pos]]
    depth = power * np.cumsum(alpha[:n_pos])
    bound = np.log2(1.0 + h_sorted * depth) \
        - np.log2(1.0 + h_sorted * np.concatenate(([0.0], depth[:-1])))
    return bool(np.all(per_level[:n_pos] <= bound + tol))

"""Stability checks for static (randomized, state-blind) policies.

A static policy admits at fixed per-user rates, fires each combination
subset J as an independent Bernoulli(sigma_bar_J) coin, and transmits one of
a fixed menu of rate points drawn per slot from a mixture.  Such a policy
keeps every queue bounded when, in expectation per slot,

  admissions:  sum over J containing k of sigma_bar_J  >=  a_bar_k   (files)
  service:     T * mu_bar_I  >=  sum over J superseteq I
                                   of b(J, I) * F * sigma_bar_J       (bits)

with mu_bar the mean of the mixed rate point over the fading distribution.
The module estimates mu_bar by Monte Carlo, reports the two slack vectors,
and can simulate the static policy's counters directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .broadcast import max_weighted_rate
from .caching import CacheParams
from .channel import ChannelParams, FadingProcess
from .policy import nominal_inflow
from .subsets import member_matrix


@dataclass(frozen=True)
class RatePoint:
    """One entry of the per-slot rate menu, with its power-split witness."""

    mu: np.ndarray     # (2**K,) bits per channel use by subset mask
    alpha: np.ndarray  # (K,) power fractions by sorted position


def default_rate_points(gains: np.ndarray, power: float) -> list[RatePoint]:
    """K single-user full-power points plus the equal-weight multicast point."""
    gains = np.asarray(gains, dtype=float)
    num = len(gains)
    order = np.argsort(-gains, kind="stable")
    points = []
    for k in range(num):
        mu = np.zeros(1 << num)
        alpha = np.zeros(num)
        if gains[k] > 0:
            mu[1 << k] = np.log2(1.0 + gains[k] * power)
            alpha[int(np.flatnonzero(order == k)[0])] = 1.0
        points.append(RatePoint(mu=mu, alpha=alpha))
    weights = np.ones(1 << num)
    weights[0] = 0.0
    alloc = max_weighted_rate(gains, power, weights)
    points.append(RatePoint(mu=alloc.mu, alpha=alloc.alpha))
    return points


@dataclass(frozen=True)
class StaticPolicy:
    admission_rates: np.ndarray    # (K,) a_bar, files/slot
    combination_rates: np.ndarray  # (2**K,) sigma_bar, firing probabilities
    mixture: np.ndarray            # (K+1,) probabilities over the rate menu

    def __post_init__(self) -> None:
        if np.any(self.admission_rates < 0):
            raise ValueError("admission rates must be nonnegative")
        sig = self.combination_rates
        if sig[0] != 0 or np.any(sig < 0) or np.any(sig > 1):
            raise ValueError("combination rates must be probabilities, none "
                             "on the empty set")
        psi = self.mixture
        if np.any(psi < 0) or abs(psi.sum() - 1.0) > 1e-9:
            raise ValueError("mixture must be a probability vector")


def mean_service_rate(channel: ChannelParams, mixture: np.ndarray,
                      num_samples: int, seed,
                      rate_points=default_rate_points):
    """Monte Carlo estimate of the mixed mean rate per codeword queue.

    Averages the mixture-weighted menu over sampled fading states; returns
    (mu_bar, standard_error), both (2**K,).
    """
    fading = FadingProcess(channel, seed)
    psi = np.asarray(mixture, dtype=float)
    acc = np.zeros(1 << channel.num_users)
    acc2 = np.zeros_like(acc)
    for _ in range(num_samples):
        gains = fading.sample()
        menu = rate_points(gains, channel.power)
        mixed = sum(p * point.mu for p, point in zip(psi, menu))
        acc += mixed
        acc2 += mixed**2
    mean = acc / num_samples
    var = np.maximum(acc2 / num_samples - mean**2, 0.0)
    return mean, np.sqrt(var / num_samples)


@dataclass(frozen=True)
class FeasibilityReport:
    admission_slack: np.ndarray  # (K,) files/slot
    service_slack: np.ndarray    # (2**K,) bits/slot, empty set entry is 0
    feasible: bool


def check_feasibility(static: StaticPolicy, mu_bar: np.ndarray,
                      cache: CacheParams, slot_length: int) -> FeasibilityReport:
    """Slack of the admission and service conditions under mean rates."""
    num = len(static.admission_rates)
    per_user = member_matrix(num).T @ static.combination_rates
    admission_slack = per_user - static.admission_rates
    service_slack = slot_length * np.asarray(mu_bar, dtype=float) \
        - nominal_inflow(static.combination_rates, cache)
    service_slack[0] = 0.0
    return FeasibilityReport(
        admission_slack=admission_slack,
        service_slack=service_slack,
        feasible=bool(np.all(admission_slack >= 0)
                      and np.all(service_slack >= 0)),
    )


def simulate_static(static: StaticPolicy, channel: ChannelParams,
                    cache: CacheParams, slots: int, seed,
                    rate_points=default_rate_points):
    """Run the static policy on the queue counters and record totals.

    Returns per-slot arrays: total file backlog (files) and total codeword
    backlog (bits); linear growth in either flags infeasibility.
    """
    root = np.random.SeedSequence(seed)
    chan_seed, coin_seed = root.spawn(2)
    fading = FadingProcess(channel, chan_seed)
    rng = np.random.Generator(np.random.Philox(coin_seed))
    num = channel.num_users
    n_masks = 1 << num
    members = member_matrix(num)
    s = np.zeros(num)
    q = np.zeros(n_masks)
    file_totals = np.empty(slots)
    bit_totals = np.empty(slots)
    for t in range(slots):
        gains = fading.sample()
        menu = rate_points(gains, channel.power)
        pick = rng.choice(len(menu), p=static.mixture)
        mu = menu[pick].mu
        fire = (rng.random(n_masks) < static.combination_rates).astype(float)
        fire[0] = 0.0
        s = np.maximum(s - members.T @ fire, 0.0) + static.admission_rates
        q = np.maximum(q - channel.slot_length * mu, 0.0) + nominal_inflow(fire, cache)
        file_totals[t] = s.sum()
        bit_totals[t] = q.sum()
    return {"file_backlog": file_totals, "codeword_backlog_bits": bit_totals}


def linear_trend(values: np.ndarray):
    """Least-squares slope per slot and R**2 of a scalar trajectory."""
    y = np.asarray(values, dtype=float)
    x = np.arange(len(y), dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    fit = slope * x + intercept
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return float(slope), r2

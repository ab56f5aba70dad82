"""Drift-plus-penalty controller for fair online coded caching.

Three coupled queue families drive four per-slot decisions, all taken from
the pre-update state and applied simultaneously:

  gamma_k  virtual arrivals: argmax of V*g(x) - U_k*x over [0, gamma_max],
           where g is the alpha-fair utility; closed form below.
  a_k      admissions: gamma_max if U_k >= S_k else 0 (flow queue pressure
           must have caught up with the file queue before admitting more).
  sigma_J  combinations: fire (combine one requested file per member of J
           into XOR codewords) iff the member file backlog strictly exceeds
           the codeword backlog J would feed, both in file units.
  mu       transmission: the weighted-rate maximizer over the broadcast
           region with the codeword queues as weights.

Counter updates per slot, elementwise with [x]+ = max(x, 0):

  S_k <- [S_k - sum_{Jni k} sigma_J]+ + a_k          (files)
  Q_I <- [Q_I - T*mu_I]+ + arrivals_I                (bits)
  U_k <- [U_k - a_k]+ + gamma_k                      (files)

Arrivals to Q are the codeword bits generated this slot; when combinations
are commanded beyond the files physically present the shortfall is charged
at the nominal per-file codeword load so the counters never fall behind the
bits actually queued.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .broadcast import RateAllocation, max_weighted_rate
from .caching import CacheParams, codeword_load
from .subsets import member_matrix, popcounts, weighted_subset_sums, weighted_superset_sums


@dataclass(frozen=True)
class PolicyParams:
    fairness_alpha: float   # alpha >= 0, fairness exponent of the utility
    v: float                # V, utility weight against queue drift
    domain_shift: float     # d > 0, shifts the utility away from x = 0
    admit_cap: float        # gamma_max, files/slot bound on (virtual) arrivals
    combine_cap: int = 1    # sigma_max, combinations per subset per slot

    def __post_init__(self) -> None:
        if self.fairness_alpha < 0:
            raise ValueError("fairness_alpha must be nonnegative")
        if self.v <= 0:
            raise ValueError("v must be positive")
        if self.domain_shift <= 0:
            raise ValueError("domain_shift must be positive")
        if self.admit_cap <= 0:
            raise ValueError("admit_cap must be positive")
        if self.combine_cap < 1:
            raise ValueError("combine_cap must be at least 1")


@dataclass
class QueueState:
    """Counters: admitted-file, codeword-bit and virtual flow queues.

    `codeword_bits` has one entry per subset mask (index 0, the empty set,
    stays zero).
    """

    user_files: np.ndarray     # (K,) S, files
    codeword_bits: np.ndarray  # (2**K,) Q, bits
    virtual: np.ndarray        # (K,) U, files

    @classmethod
    def zeros(cls, num_users: int) -> "QueueState":
        return cls(user_files=np.zeros(num_users),
                   codeword_bits=np.zeros(1 << num_users),
                   virtual=np.zeros(num_users))

    def copy(self) -> "QueueState":
        return QueueState(self.user_files.copy(), self.codeword_bits.copy(),
                          self.virtual.copy())


@dataclass(frozen=True)
class SlotDecision:
    """All decisions of one slot, taken from the pre-update state."""

    gamma: np.ndarray          # (K,) virtual arrivals
    admissions: np.ndarray     # (K,) file admissions, 0 or admit_cap
    sigma: np.ndarray          # (2**K,) commanded combinations per subset
    margins: np.ndarray        # (2**K,) file backlog minus codeword backlog
    allocation: RateAllocation


def utility(x, fairness_alpha: float, domain_shift: float):
    """Alpha-fair utility g(x) = (d+x)**(1-a)/(1-a), or ln(1 + x/d) at a=1."""
    x = np.asarray(x, dtype=float)
    if fairness_alpha == 1.0:
        return np.log1p(x / domain_shift)
    return (domain_shift + x) ** (1.0 - fairness_alpha) / (1.0 - fairness_alpha)


def virtual_arrival(virtual: np.ndarray, params: PolicyParams) -> np.ndarray:
    """Per-user argmax of V*g(x) - U*x over [0, gamma_max].

    For alpha > 0 the stationary point is (V/U)**(1/alpha) - d, clipped; for
    alpha = 0 the objective is linear in x, so the arrival is bang-bang on
    U <= V.  U = 0 always saturates the cap.
    """
    u = np.asarray(virtual, dtype=float)
    a = params.fairness_alpha
    if a == 0.0:
        return np.where(u <= params.v, params.admit_cap, 0.0)
    with np.errstate(divide="ignore", over="ignore"):
        x = np.where(u > 0.0,
                     (params.v / u) ** (1.0 / a) - params.domain_shift,
                     np.inf)
    return np.clip(x, 0.0, params.admit_cap)


def admission(user_files: np.ndarray, virtual: np.ndarray,
              params: PolicyParams) -> np.ndarray:
    """Admit a burst of admit_cap files iff U_k >= S_k (ties admit)."""
    return np.where(np.asarray(virtual) >= np.asarray(user_files),
                    params.admit_cap, 0.0)


def codeword_backlog(codeword_bits: np.ndarray, cache: CacheParams) -> np.ndarray:
    """Per subset J: sum over I subseteq J of b(J,I) * Q_I / F, in file units.

    This is the codeword-queue pressure a combination serving J would push
    against; b(J,I) = m**(|I|-1) (1-m)**(|J|-|I|+1) factorizes over excluded
    members, so a weighted subset-sum transform evaluates all J at once.
    """
    q = np.asarray(codeword_bits, dtype=float)
    m = cache.memory_fraction
    num_users = len(q).bit_length() - 1
    y = m ** popcounts(num_users) * q / cache.file_bits
    y[0] = 0.0
    return (1.0 - m) / m * weighted_subset_sums(y, 1.0 - m)


def combination_command(user_files: np.ndarray, codeword_bits: np.ndarray,
                        params: PolicyParams, cache: CacheParams):
    """Combinations and their backlog margins: fire sigma_max combinations
    for J iff sum of S over members strictly exceeds the codeword backlog."""
    file_side = member_matrix(len(user_files)) @ np.asarray(user_files, dtype=float)
    margins = file_side - codeword_backlog(codeword_bits, cache)
    sigma = np.where(margins > 0.0, float(params.combine_cap), 0.0)
    sigma[0] = 0.0
    return sigma, margins


def nominal_inflow(sigma: np.ndarray, cache: CacheParams) -> np.ndarray:
    """Codeword bits per queue that commanded combinations nominally create:
    inflow_I = sum over J superseteq I of b(J,I) * F * sigma_J."""
    sigma = np.asarray(sigma, dtype=float)
    m = cache.memory_fraction
    num_users = len(sigma).bit_length() - 1
    t = weighted_superset_sums(sigma, 1.0 - m)
    out = (1.0 - m) * m ** (popcounts(num_users) - 1.0) * cache.file_bits * t
    out[0] = 0.0
    return out


def nominal_segment_loads(served: int, cache: CacheParams) -> list[tuple[int, float]]:
    """(mask, bits) of every codeword a single combination of `served` feeds,
    at the real-valued nominal load b(J,I) * F."""
    m = cache.memory_fraction
    out = []
    sub = served
    while sub:
        out.append((sub, codeword_load(m, served, sub) * cache.file_bits))
        sub = (sub - 1) & served
    out.reverse()
    return out


def decide(state: QueueState, gains: np.ndarray, power: float,
           params: PolicyParams, cache: CacheParams) -> SlotDecision:
    """All four decisions from the pre-update state; applies no updates."""
    gamma = virtual_arrival(state.virtual, params)
    admit = admission(state.user_files, state.virtual, params)
    sigma, margins = combination_command(state.user_files, state.codeword_bits,
                                         params, cache)
    alloc = max_weighted_rate(gains, power, state.codeword_bits)
    return SlotDecision(gamma=gamma, admissions=admit, sigma=sigma,
                        margins=margins, allocation=alloc)


def advance(state: QueueState, decision: SlotDecision, inflow_bits: np.ndarray,
            slot_length: int) -> QueueState:
    """Apply one slot's counter updates; service and arrivals both use the
    pre-update state, service saturating at zero."""
    consumed = member_matrix(len(state.user_files)).T @ decision.sigma
    s = np.maximum(state.user_files - consumed, 0.0) + decision.admissions
    q = np.maximum(state.codeword_bits
                   - slot_length * decision.allocation.mu, 0.0) + inflow_bits
    q[0] = 0.0
    u = np.maximum(state.virtual - decision.admissions, 0.0) + decision.gamma
    return QueueState(user_files=s, codeword_bits=q, virtual=u)


def step(state: QueueState, gains: np.ndarray, power: float, slot_length: int,
         params: PolicyParams, cache: CacheParams):
    """One closed-loop slot on counters alone (combinations charged at their
    nominal loads).  Returns the new state and the decisions."""
    dec = decide(state, gains, power, params, cache)
    inflow = nominal_inflow(dec.sigma, cache)
    return advance(state, dec, inflow, slot_length), dec

"""Decentralized coded caching: placement statistics and codeword enumeration.

Placement: every user caches a random m-fraction of every file, sampled
independently per (user, file, bit).  Delivery for a subset J of users
combines one requested file per member into XOR codewords: for each nonempty
I subseteq J there is one codeword segment, useful to exactly the users in I,
whose size per file bit is

    b(J, I) = m**(|I|-1) * (1-m)**(|J|-|I|+1).

The |I| member shares XORed together all have this size (each is the part of
one member's file cached by exactly I minus that member and nobody else in J;
membership outside J is unconstrained, which is what folds the (K-|J|) free
coordinates out of the plain subfile fraction).  Summed over a full delivery
this reproduces the classic total load (1/m - 1)(1 - (1-m)**K).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .subsets import card, members_of, validate_mask


@dataclass(frozen=True)
class CacheParams:
    """Placement parameters shared by every user."""

    memory_fraction: float  # m, fraction of each file cached per user
    file_bits: int          # F

    def __post_init__(self) -> None:
        if not 0.0 < self.memory_fraction <= 1.0:
            raise ValueError("memory_fraction must be in (0, 1]")
        if self.file_bits < 1:
            raise ValueError("file_bits must be a positive integer")


def subfile_fraction(m: float, num_users: int, cached_by: int) -> float:
    """Expected fraction of a file cached by exactly a given set of `cached_by`
    users out of `num_users`: m**s * (1-m)**(K-s)."""
    if not 0 <= cached_by <= num_users:
        raise ValueError("cached_by must be between 0 and num_users")
    return m**cached_by * (1.0 - m) ** (num_users - cached_by)


def codeword_load(m: float, served: int, useful_to: int) -> float:
    """Per-file-bit size b(J, I) of the codeword for I within a delivery to J.

    `served` is the mask J, `useful_to` the mask I; requires nonempty I
    subseteq J.
    """
    j = card(served)
    i = card(useful_to)
    if i == 0:
        raise ValueError("codeword target subset must be nonempty")
    if useful_to & ~served:
        raise ValueError("codeword target must be a subset of the served set")
    return m ** (i - 1) * (1.0 - m) ** (j - i + 1)


def total_load(m: float, num_users: int) -> float:
    """Aggregate delivery load (in file units) for one file per user,
    (1/m - 1) * (1 - (1-m)**K); decreasing in m, and -> (1-m) K as m -> 0."""
    if not 0.0 < m <= 1.0:
        raise ValueError("m must be in (0, 1]")
    if num_users < 1:
        raise ValueError("num_users must be positive")
    return (1.0 / m - 1.0) * (1.0 - (1.0 - m) ** num_users)


def segment_sizes(m: float, file_bits: int, group_size: int) -> np.ndarray:
    """Integer codeword segment sizes by cardinality for a delivery group of
    `group_size` users.

    Entry i-1 is the size in bits of each segment useful to exactly i users.
    Sizes apportion round((1-m)*F) bits per user exactly: start from floors of
    b*F and distribute the per-user deficit largest-fraction-first, in whole
    units of "segments per user" per cardinality class; any remainder lands on
    the user-exclusive singleton class, which is the only class with unit
    granularity.
    """
    if group_size < 1:
        raise ValueError("group_size must be positive")
    target = round((1.0 - m) * file_bits)  # bits each user still needs
    analytic = np.array(
        [codeword_load(m, (1 << group_size) - 1, (1 << i) - 1) * file_bits
         for i in range(1, group_size + 1)]
    )
    per_user = np.array([comb(group_size - 1, i) for i in range(group_size)])
    sizes = np.floor(analytic + 1e-9).astype(np.int64)
    deficit = target - int(per_user @ sizes)
    if deficit < 0:
        # only possible when round() trimmed the target below the floor sum
        sizes[0] += deficit
        deficit = 0
    fracs = analytic - sizes
    for i in np.argsort(-fracs, kind="stable"):
        if per_user[i] <= deficit:
            sizes[i] += 1
            deficit -= int(per_user[i])
    sizes[0] += deficit
    if sizes[0] < 0:
        raise ValueError("file_bits too small to apportion codeword segments")
    return sizes


@dataclass(frozen=True)
class Segment:
    """One XOR codeword segment emitted by a delivery combination."""

    useful_to: int  # mask I of users that can decode it
    bits: int


def enumerate_segments(served: int, params: CacheParams,
                       num_users: int | None = None) -> list[Segment]:
    """All codeword segments for one combination serving the users in `served`.

    Returns one entry per nonempty I subseteq J in ascending mask order,
    skipping zero-size segments.  Per member the emitted bits total exactly
    round((1-m) * F).
    """
    if num_users is not None:
        validate_mask(served, num_users)
    elif served <= 0:
        raise ValueError("served mask must be a nonempty subset")
    group = card(served)
    sizes = segment_sizes(params.memory_fraction, params.file_bits, group)
    out = []
    sub = served
    while sub:  # standard descending subset walk, reversed at the end
        bits = int(sizes[card(sub) - 1])
        if bits > 0:
            out.append(Segment(useful_to=sub, bits=bits))
        sub = (sub - 1) & served
    out.reverse()
    return out


def delivery_target_bits(params: CacheParams) -> int:
    """Bits that must reach a user per delivered file: round((1-m) * F)."""
    return round((1.0 - params.memory_fraction) * params.file_bits)


__all__ = [
    "CacheParams",
    "Segment",
    "codeword_load",
    "delivery_target_bits",
    "enumerate_segments",
    "members_of",
    "segment_sizes",
    "subfile_fraction",
    "total_load",
]

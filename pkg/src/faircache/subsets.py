"""Bitmask utilities for user subsets.

Users are numbered 1..K and subset membership is encoded in a K-bit mask
(bit k-1 set means user k is a member).  Arrays that are indexed by subset
use length 2**K with the mask as the index; entry 0 (the empty set) is kept
at zero so the fast subset/superset transforms below stay branch-free.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_USERS = 16  # 2**K subset state must stay small


def mask_of(members) -> int:
    """Mask for an iterable of 1-based user ids."""
    m = 0
    for k in members:
        m |= 1 << (k - 1)
    return m


def members_of(mask: int) -> tuple[int, ...]:
    """1-based user ids present in `mask`, ascending."""
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def card(mask: int) -> int:
    return int(mask).bit_count()


def validate_mask(mask: int, num_users: int, nonempty: bool = True) -> int:
    if not isinstance(mask, (int, np.integer)):
        raise TypeError(f"subset mask must be an int, got {type(mask).__name__}")
    mask = int(mask)
    if mask < 0 or mask >= (1 << num_users):
        raise ValueError(f"mask {mask} out of range for {num_users} users")
    if nonempty and mask == 0:
        raise ValueError("subset must be nonempty")
    return mask


@lru_cache(maxsize=None)
def popcounts(num_users: int) -> np.ndarray:
    """|mask| for every mask in [0, 2**K)."""
    n = 1 << num_users
    pc = np.zeros(n, dtype=np.int64)
    for b in range(num_users):
        pc[(np.arange(n) >> b) & 1 == 1] += 1
    pc.setflags(write=False)
    return pc


@lru_cache(maxsize=None)
def member_matrix(num_users: int) -> np.ndarray:
    """Boolean (2**K, K) matrix: row `mask` flags the members of `mask`."""
    masks = np.arange(1 << num_users)
    mm = ((masks[:, None] >> np.arange(num_users)[None, :]) & 1).astype(bool)
    mm.setflags(write=False)
    return mm


def member_sums(x: np.ndarray) -> np.ndarray:
    """out[mask] = sum of x[k-1] over members k of mask, for all masks."""
    num_users = len(x)
    return member_matrix(num_users) @ np.asarray(x, dtype=float)


def member_max(x: np.ndarray, empty: float = 0.0) -> np.ndarray:
    """out[mask] = max of x[k-1] over members k of mask (`empty` for mask 0)."""
    x = np.asarray(x, dtype=float)
    n = 1 << len(x)
    out = np.full(n, empty)
    masks = np.arange(n)
    for b in range(len(x)):
        sel = (masks >> b) & 1 == 1
        np.maximum(out, np.where(sel, x[b], empty), out=out)
    return out


def weighted_subset_sums(y: np.ndarray, weight: float) -> np.ndarray:
    """out[mask] = sum over I subset of mask of y[I] * weight**(|mask|-|I|).

    Standard subset-sum DP, one sweep per bit; y has length 2**K indexed by
    mask.  With weight=1 this is the plain zeta transform.
    """
    f = np.asarray(y, dtype=float).copy()
    n = len(f)
    num_users = n.bit_length() - 1
    masks = np.arange(n)
    for b in range(num_users):
        has = (masks >> b) & 1 == 1
        f[has] += weight * f[masks[has] ^ (1 << b)]
    return f


def weighted_superset_sums(y: np.ndarray, weight: float) -> np.ndarray:
    """out[mask] = sum over J superset of mask of y[J] * weight**(|J|-|mask|)."""
    f = np.asarray(y, dtype=float).copy()
    n = len(f)
    num_users = n.bit_length() - 1
    masks = np.arange(n)
    for b in range(num_users):
        lacks = (masks >> b) & 1 == 0
        f[lacks] += weight * f[masks[lacks] | (1 << b)]
    return f

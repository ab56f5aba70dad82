"""Block-fading Gaussian broadcast channel.

Per slot t user k sees a power gain h_k(t) = beta_k**2 * X with X ~ Exp(1),
i.i.d. across users and slots (Rayleigh amplitude fading on top of a static
path loss).  Gains are sampled by inverse CDF, -ln(1 - u), from one
counter-based stream per user so a run is reproducible bit for bit and
independent of how many users are sampled together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subsets import MAX_USERS


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ChannelParams:
    num_users: int
    pathloss: tuple[float, ...]  # beta_k, amplitude scale per user
    power: float                 # P, linear transmit power budget
    slot_length: int             # T, channel uses per slot

    def __post_init__(self) -> None:
        if not 1 <= self.num_users <= MAX_USERS:
            raise ValueError(f"num_users must be in [1, {MAX_USERS}]")
        if len(self.pathloss) != self.num_users:
            raise ValueError("pathloss must list one coefficient per user")
        if any(b <= 0 for b in self.pathloss):
            raise ValueError("pathloss coefficients must be positive")
        if self.power <= 0:
            raise ValueError("power must be positive")
        if self.slot_length < 1:
            raise ValueError("slot_length must be a positive integer")


class FadingProcess:
    """Draws one gain vector per slot from per-user Philox streams."""

    def __init__(self, params: ChannelParams, seed) -> None:
        self.params = params
        seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self._gens = [np.random.Generator(np.random.Philox(child))
                      for child in seq.spawn(params.num_users)]
        self._scale = np.asarray(params.pathloss, dtype=float) ** 2
        self.slot = 0

    def sample(self) -> np.ndarray:
        u = np.array([g.random() for g in self._gens])
        self.slot += 1
        return self._scale * -np.log1p(-u)


class ConstantChannel:
    """Fixed-gain stand-in for tests and feasibility probes."""

    def __init__(self, gains) -> None:
        self.gains = np.asarray(gains, dtype=float)
        self.slot = 0

    def sample(self) -> np.ndarray:
        self.slot += 1
        return self.gains.copy()

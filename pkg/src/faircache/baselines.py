"""Reference delivery schemes to compare the controller against.

Both serve an infinite backlog of file requests (a fresh request starts the
moment the previous one completes) and are scored with the same delivered-
file accounting as the controller.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .caching import CacheParams, codeword_load, delivery_target_bits
from .channel import ChannelParams
from .subsets import card, members_of


class OpportunisticUnicast:
    """Alpha-fair opportunistic scheduling of uncoded unicast residuals.

    Each slot the full power serves the single user maximizing
    log2(1 + h_k P) / T_k**alpha, where T_k is the running mean of the rate
    each user was actually allocated (zero in slots it was not served),
    seeded at 1e-3 so the first slot is well defined.  Cached content is not
    re-sent: a request completes after (1-m) F bits.
    """

    def __init__(self, channel: ChannelParams, cache: CacheParams,
                 fairness_alpha: float) -> None:
        target = delivery_target_bits(cache)
        if target <= 0:
            raise ValueError("baselines need a positive per-file residual")
        self.channel = channel
        self.alpha = fairness_alpha
        self.target = target
        self.residual = np.full(channel.num_users, float(self.target))
        self.avg_rate = np.full(channel.num_users, 1e-3)
        self.slot = 0

    def step(self, gains: np.ndarray):
        """Serve one slot; returns (delivered, admitted) file counts."""
        self.slot += 1
        num = self.channel.num_users
        delivered = np.zeros(num, dtype=np.int64)
        admitted = np.zeros(num, dtype=np.int64)
        if self.slot == 1:
            admitted += 1  # every user starts with one outstanding request

        rates = np.log2(1.0 + gains * self.channel.power)
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = np.where(self.avg_rate > 0, rates / self.avg_rate**self.alpha,
                              np.where(rates > 0, np.inf, 0.0))
        k = int(np.argmax(scores))
        bits = self.channel.slot_length * rates[k]
        while bits >= self.residual[k] - 1e-9 and self.residual[k] > 0:
            bits -= self.residual[k]
            self.residual[k] = float(self.target)
            delivered[k] += 1
            admitted[k] += 1
        self.residual[k] -= bits

        served = np.zeros(num)
        served[k] = rates[k]
        self.avg_rate += (served - self.avg_rate) / self.slot
        return delivered, admitted

    def in_flight(self) -> np.ndarray:
        return np.ones(self.channel.num_users)


class TdmaCodedCaching:
    """Fixed coded-caching delivery, one codeword at a time.

    A round queues all 2**K - 1 codewords for the full user set, sized
    round(b([K], I) * F) and ordered by cardinality then mask; each codeword
    is sent at the rate of its weakest member, log2(1 + P min h), and unused
    channel uses inside a slot roll over to the next codeword.  Completing a
    round delivers one file to every user, and the next round starts at
    once.
    """

    def __init__(self, channel: ChannelParams, cache: CacheParams) -> None:
        num = channel.num_users
        full = (1 << num) - 1
        template = []
        m = cache.memory_fraction
        for mask in sorted(range(1, full + 1), key=lambda s: (card(s), s)):
            bits = round(codeword_load(m, full, mask) * cache.file_bits)
            if bits > 0:
                template.append((mask, float(bits),
                                 np.array([u - 1 for u in members_of(mask)])))
        if not template:
            raise ValueError("all codewords round to zero bits")
        self.channel = channel
        self.template = template
        self.pending = deque((mask, bits, idx) for mask, bits, idx in template)
        self.slot = 0
        self._announce = True  # first step reports the initial round's requests

    def step(self, gains: np.ndarray):
        """Serve one slot; returns (delivered, admitted) file counts."""
        self.slot += 1
        num = self.channel.num_users
        delivered = np.zeros(num, dtype=np.int64)
        admitted = np.zeros(num, dtype=np.int64)
        if self._announce:
            admitted += 1
            self._announce = False

        uses = float(self.channel.slot_length)
        while uses > 1e-12:
            mask, bits, idx = self.pending[0]
            rate = np.log2(1.0 + self.channel.power * float(np.min(gains[idx])))
            if rate <= 0.0:
                break  # weakest member is in a deep fade, slot is lost
            sendable = uses * rate
            if sendable >= bits - 1e-9:
                uses -= bits / rate
                self.pending.popleft()
                if not self.pending:
                    delivered += 1
                    admitted += 1
                    self.pending.extend(self.template)
            else:
                self.pending[0] = (mask, bits - sendable, idx)
                uses = 0.0
        return delivered, admitted

    def pending_bits(self) -> float:
        return float(sum(b for _, b, _ in self.pending))

    def in_flight(self) -> np.ndarray:
        return np.ones(self.channel.num_users)

"""Slot-level simulation: physical file delivery under each policy.

The controller's queue counters deliberately stay real-valued, so the engine
keeps a parallel physical ledger: admitted file mass materializes into whole
files, combinations consume one ready file per member (commanded
combinations beyond the files present are charged to the counters at nominal
load but generate no bits), and codeword segments drain FIFO at the
scheduled rate.  A file counts as delivered in the slot its last segment
drains, which keeps per-file bit conservation exact.

Per-slot order of operations: decide from pre-update state, drain segments
that existed before the slot, generate this slot's segments, materialize
this slot's admissions, then advance the counters.  That matches counter
updates of the form [queue - service]+ + arrivals.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, asdict

import numpy as np

from . import policy as policy_mod
from .baselines import OpportunisticUnicast, TdmaCodedCaching
from .caching import CacheParams, delivery_target_bits, enumerate_segments
from .channel import ChannelParams, FadingProcess
from .policy import PolicyParams, QueueState
from .subsets import member_matrix

POLICIES = ("lyapunov", "unicast-opp", "tdma-cc")


@dataclass(frozen=True)
class RunSpec:
    """Everything one simulation run depends on."""

    policy: str
    channel: ChannelParams
    cache: CacheParams
    control: PolicyParams
    slots: int
    seed: int
    warmup_fraction: float = 0.1
    window: int = 1000

    def __post_init__(self) -> None:
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.slots < 1:
            raise ValueError("slots must be positive")
        if not 0.0 <= self.warmup_fraction < 1.0:
            raise ValueError("warmup_fraction must be in [0, 1)")
        if self.window < 1:
            raise ValueError("window must be positive")


class _Record:
    """One admitted file on its way through combination and delivery."""

    __slots__ = ("user", "outstanding", "bits_total")

    def __init__(self, user: int) -> None:
        self.user = user
        self.outstanding = 0
        self.bits_total = 0


class _Segment:
    """One queued codeword segment; owners are the files it helps decode."""

    __slots__ = ("remaining", "owners")

    def __init__(self, bits: float, owners: list) -> None:
        self.remaining = bits
        self.owners = owners


class DeliveryTracker:
    """Physical ledger of files and codeword segments."""

    def __init__(self, num_users: int, cache: CacheParams) -> None:
        self.num_users = num_users
        self.cache = cache
        self.target = delivery_target_bits(cache)
        self.admitted_real = np.zeros(num_users)
        self._admitted_int = np.zeros(num_users, dtype=np.int64)
        self.ready = np.zeros(num_users, dtype=np.int64)  # materialized, uncombined
        self.delivered_total = np.zeros(num_users, dtype=np.int64)
        self.conservation_violations = 0
        self._queues: dict[int, deque] = {}
        self._segment_plans: dict[int, list] = {}

    def _plan(self, served: int):
        plan = self._segment_plans.get(served)
        if plan is None:
            plan = [(seg.useful_to, seg.bits,
                     [b for b in range(self.num_users) if seg.useful_to >> b & 1])
                    for seg in enumerate_segments(served, self.cache)]
            self._segment_plans[served] = plan
        return plan

    def combine(self, served: int, count: int, inflow: np.ndarray,
                delivered: np.ndarray) -> None:
        """Consume one ready file per member, `count` times, and queue the
        XOR segments; bits are added to `inflow` per codeword queue."""
        members = [b for b in range(self.num_users) if served >> b & 1]
        plan = self._plan(served)
        for _ in range(count):
            records = {b: _Record(b) for b in members}
            for mask, bits, users in plan:
                owners = [records[b] for b in users]
                for rec in owners:
                    rec.outstanding += 1
                    rec.bits_total += bits
                queue = self._queues.get(mask)
                if queue is None:
                    queue = self._queues[mask] = deque()
                queue.append(_Segment(float(bits), owners))
                inflow[mask] += bits
            for b in members:
                self.ready[b] -= 1
                rec = records[b]
                if rec.bits_total != self.target:
                    self.conservation_violations += 1
                if rec.outstanding == 0:  # fully cached file, nothing to send
                    self.delivered_total[b] += 1
                    delivered[b] += 1

    def drain(self, bits_by_queue: np.ndarray) -> np.ndarray:
        """FIFO-serve each codeword queue by its bit budget; returns files
        delivered this slot per user.  Budget beyond the queued bits is lost,
        mirroring the saturating counter update."""
        delivered = np.zeros(self.num_users, dtype=np.int64)
        for mask in np.flatnonzero(bits_by_queue > 1e-12):
            queue = self._queues.get(mask)
            if not queue:
                continue
            budget = float(bits_by_queue[mask])
            while queue and budget > 1e-9:
                seg = queue[0]
                take = seg.remaining if seg.remaining <= budget else budget
                seg.remaining -= take
                budget -= take
                if seg.remaining <= 1e-9:
                    queue.popleft()
                    for rec in seg.owners:
                        rec.outstanding -= 1
                        if rec.outstanding == 0:
                            self.delivered_total[rec.user] += 1
                            delivered[rec.user] += 1
        return delivered

    def materialize(self, admissions: np.ndarray) -> None:
        """Turn admitted file mass into whole ready files (floor)."""
        self.admitted_real += admissions
        new_int = np.floor(self.admitted_real + 1e-9).astype(np.int64)
        self.ready += new_int - self._admitted_int
        self._admitted_int = new_int


@dataclass
class WindowRow:
    """Windowed trace entry; rates are per slot, queues are window means."""

    slot: int  # 1-based slot index at the window's end
    delivered_rate: np.ndarray
    admitted_rate: np.ndarray
    queue_files: float
    queue_codeword_files: float
    queue_virtual: float
    sum_utility: float


@dataclass
class RunSummary:
    policy: str
    num_users: int
    v: float
    fairness_alpha: float
    seed: int
    slots: int
    warmup_slots: int
    admitted_rate: list[float]
    delivered_rate: list[float]
    sum_admitted_rate: float
    sum_delivered_rate: float
    sum_utility: float
    delivered_files: list[int]
    mean_queue_files: float
    mean_queue_codeword_files: float
    mean_queue_virtual: float
    mean_queue_total: float
    bit_conservation_violations: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunResult:
    summary: RunSummary
    trace: list[WindowRow] = field(default_factory=list)


class _Meter:
    """Shared window / post-warmup accounting."""

    def __init__(self, spec: RunSpec) -> None:
        self.spec = spec
        self.warm = int(round(spec.slots * spec.warmup_fraction))
        k = spec.channel.num_users
        self._win_del = np.zeros(k)
        self._win_adm = np.zeros(k)
        self._win_q = np.zeros(3)
        self._win_len = 0
        self._win_start = 0
        self._post_del = np.zeros(k)
        self._post_adm = np.zeros(k)
        self._post_q = np.zeros(3)
        self.rows: list[WindowRow] = []

    def record(self, t: int, delivered, admitted, queues) -> None:
        self._win_del += delivered
        self._win_adm += admitted
        self._win_q += queues
        self._win_len += 1
        if t >= self.warm:
            self._post_del += delivered
            self._post_adm += admitted
            self._post_q += queues
        if self._win_len == self.spec.window or t == self.spec.slots - 1:
            n = self._win_len
            ctl = self.spec.control
            rate = self._win_del / n
            self.rows.append(WindowRow(
                slot=t + 1,
                delivered_rate=rate,
                admitted_rate=self._win_adm / n,
                queue_files=float(self._win_q[0] / n),
                queue_codeword_files=float(self._win_q[1] / n),
                queue_virtual=float(self._win_q[2] / n),
                sum_utility=float(np.sum(policy_mod.utility(
                    rate, ctl.fairness_alpha, ctl.domain_shift))),
            ))
            self._win_del[:] = 0.0
            self._win_adm[:] = 0.0
            self._win_q[:] = 0.0
            self._win_len = 0

    def finalize(self, delivered_files, violations: int) -> RunResult:
        spec = self.spec
        ctl = spec.control
        n = max(spec.slots - self.warm, 1)
        delivered = self._post_del / n
        admitted = self._post_adm / n
        q = self._post_q / n
        summary = RunSummary(
            policy=spec.policy,
            num_users=spec.channel.num_users,
            v=ctl.v,
            fairness_alpha=ctl.fairness_alpha,
            seed=spec.seed,
            slots=spec.slots,
            warmup_slots=self.warm,
            admitted_rate=[float(x) for x in admitted],
            delivered_rate=[float(x) for x in delivered],
            sum_admitted_rate=float(admitted.sum()),
            sum_delivered_rate=float(delivered.sum()),
            sum_utility=float(np.sum(policy_mod.utility(
                delivered, ctl.fairness_alpha, ctl.domain_shift))),
            delivered_files=[int(x) for x in delivered_files],
            mean_queue_files=float(q[0]),
            mean_queue_codeword_files=float(q[1]),
            mean_queue_virtual=float(q[2]),
            mean_queue_total=float(q.sum()),
            bit_conservation_violations=violations,
        )
        return RunResult(summary=summary, trace=self.rows)


def _run_lyapunov(spec: RunSpec) -> RunResult:
    chan = spec.channel
    k = chan.num_users
    channel = FadingProcess(chan, np.random.SeedSequence(spec.seed))
    state = QueueState.zeros(k)
    tracker = DeliveryTracker(k, spec.cache)
    meter = _Meter(spec)
    members = member_matrix(k)
    file_bits = spec.cache.file_bits
    nominal_plans: dict[int, list] = {}

    for t in range(spec.slots):
        gains = channel.sample()
        dec = policy_mod.decide(state, gains, chan.power, spec.control, spec.cache)
        delivered = tracker.drain(chan.slot_length * dec.allocation.mu)

        inflow = np.zeros(1 << k)
        commanded = np.flatnonzero(dec.sigma > 0)
        if len(commanded):
            # serve the largest backlog margins first, ties by mask
            for mask in commanded[np.lexsort((commanded, -dec.margins[commanded]))]:
                mask = int(mask)
                avail = int(tracker.ready[members[mask]].min())
                eff = min(int(dec.sigma[mask]), max(avail, 0))
                if eff:
                    tracker.combine(mask, eff, inflow, delivered)
                phantom = int(dec.sigma[mask]) - eff
                if phantom:
                    plan = nominal_plans.get(mask)
                    if plan is None:
                        plan = nominal_plans[mask] = \
                            policy_mod.nominal_segment_loads(mask, spec.cache)
                    for sub, load in plan:
                        inflow[sub] += phantom * load

        tracker.materialize(dec.admissions)
        state = policy_mod.advance(state, dec, inflow, chan.slot_length)
        meter.record(t, delivered, dec.admissions,
                     (state.user_files.sum(),
                      state.codeword_bits.sum() / file_bits,
                      state.virtual.sum()))
    return meter.finalize(tracker.delivered_total, tracker.conservation_violations)


def _run_baseline(spec: RunSpec) -> RunResult:
    chan = spec.channel
    channel = FadingProcess(chan, np.random.SeedSequence(spec.seed))
    if spec.policy == "unicast-opp":
        scheme = OpportunisticUnicast(chan, spec.cache,
                                      spec.control.fairness_alpha)
    else:
        scheme = TdmaCodedCaching(chan, spec.cache)
    meter = _Meter(spec)
    delivered_files = np.zeros(chan.num_users, dtype=np.int64)
    file_bits = spec.cache.file_bits

    for t in range(spec.slots):
        gains = channel.sample()
        delivered, admitted = scheme.step(gains)
        delivered_files += delivered
        pending = scheme.pending_bits() / file_bits \
            if isinstance(scheme, TdmaCodedCaching) else 0.0
        meter.record(t, delivered, admitted,
                     (float(scheme.in_flight().sum()), pending, 0.0))
    return meter.finalize(delivered_files, 0)


def run(spec: RunSpec) -> RunResult:
    """Simulate one configuration; deterministic in (spec, seed)."""
    if spec.policy == "lyapunov":
        return _run_lyapunov(spec)
    return _run_baseline(spec)

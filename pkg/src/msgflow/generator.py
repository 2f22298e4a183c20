"""Synthetic trace generation from ground-truth sequences.

Every trace executes a fresh pool holding ``instances_per_pattern``
instances of each ground-truth sequence, under one of three concurrency
regimes:

* ``sm-ni``: instances run atomically back-to-back in random order, one
  message per step (no interleaving).
* ``sm-i``: one message per step, chosen uniformly among the unfinished
  instances, which interleaves instances arbitrarily.
* ``mm-i``: each step emits the next message of k distinct unfinished
  instances, k drawn uniformly from [1, min(max_batch, unfinished)], so
  steps are true multisets.

Instances always complete within their trace.  With per-instance
addressing every instance carries one address for all its messages; two
concurrently unfinished instances never share one, and addresses recycle
only after an instance completes.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .flows import GroundTruth
from .model import Message, MessageInstance, Trace, TraceSet

__all__ = [
    "MODES",
    "ADDRESS_MODES",
    "GenConfig",
    "InstanceRecord",
    "TraceRecord",
    "GenMetadata",
    "PoolExhaustedError",
    "assign_addresses",
    "generate",
]

MODES = ("sm-ni", "sm-i", "mm-i")
ADDRESS_MODES = ("none", "per-instance")

_MASK64 = (1 << 64) - 1


class PoolExhaustedError(RuntimeError):
    """Raised when more instances are concurrently active than the
    address pool can serve."""


@dataclass(frozen=True)
class GenConfig:
    """Knobs of the generator; every run is fully determined by these."""

    mode: str
    instances_per_pattern: int = 1
    num_traces: int = 1
    seed: int = 0
    max_batch: int = 1
    address_mode: str = "none"
    address_pool: int = 1
    max_active: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.instances_per_pattern < 1:
            raise ValueError("instances_per_pattern must be >= 1")
        if self.num_traces < 1:
            raise ValueError("num_traces must be >= 1")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an int")
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")
        if self.address_mode not in ADDRESS_MODES:
            raise ValueError(
                f"unknown address_mode {self.address_mode!r}; expected one of {ADDRESS_MODES}"
            )
        if self.address_mode == "per-instance" and self.address_pool < 1:
            raise ValueError("address_pool must be >= 1")
        if self.max_active is not None and self.max_active < 1:
            raise ValueError("max_active must be >= 1 or None")


@dataclass(frozen=True)
class InstanceRecord:
    instance_id: str
    path_index: int
    address: int | None
    start_step: int
    end_step: int


@dataclass(frozen=True)
class TraceRecord:
    trace_id: str
    instances: tuple[InstanceRecord, ...]


@dataclass(frozen=True)
class GenMetadata:
    """Per-trace execution bookkeeping: which ground-truth sequence each
    instance ran, under which address, over which step interval."""

    config: GenConfig
    paths: tuple[tuple[Message, ...], ...]
    records: tuple[TraceRecord, ...]


def assign_addresses(intervals: Sequence[tuple[int, int]], pool_size: int) -> list[int]:
    """Assign one address per instance given (start_step, end_step)
    intervals.  Overlapping intervals never share an address; an address
    frees up strictly after its instance's end step.  Lowest free address
    wins, so sequential instances reuse address 0.
    """
    if pool_size < 1:
        raise ValueError("pool_size must be >= 1")
    order = sorted(range(len(intervals)), key=lambda i: (intervals[i][0], i))
    free: list[int] = list(range(pool_size))
    heapq.heapify(free)
    busy: list[tuple[int, int]] = []  # (end_step, address)
    result = [0] * len(intervals)
    for i in order:
        start, end = intervals[i]
        if end < start:
            raise ValueError(f"interval {i} ends before it starts: ({start}, {end})")
        while busy and busy[0][0] < start:
            _, addr = heapq.heappop(busy)
            heapq.heappush(free, addr)
        if not free:
            raise PoolExhaustedError(
                f"address pool of {pool_size} exhausted at step {start}: "
                f"{len(busy)} instances still active"
            )
        addr = heapq.heappop(free)
        result[i] = addr
        heapq.heappush(busy, (end, addr))
    return result


def _schedule(
    lengths: Sequence[int], cfg: GenConfig, rng: np.random.Generator
) -> list[list[int]]:
    """Emission steps per instance (index-aligned with the pool)."""
    n = len(lengths)
    emits: list[list[int]] = [[] for _ in range(n)]

    if cfg.mode == "sm-ni":
        step = 0
        for idx in rng.permutation(n):
            for _ in range(lengths[idx]):
                emits[idx].append(step)
                step += 1
        return emits

    remaining = list(lengths)
    started = [False] * n
    unfinished = list(range(n))
    active = 0
    cap = cfg.max_active

    def eligible(exclude: set[int]) -> list[int]:
        if cap is None or active < cap:
            return [i for i in unfinished if i not in exclude]
        return [i for i in unfinished if started[i] and i not in exclude]

    def emit(idx: int, step: int) -> None:
        nonlocal active
        if not started[idx]:
            started[idx] = True
            active += 1
        emits[idx].append(step)
        remaining[idx] -= 1
        if remaining[idx] == 0:
            unfinished.remove(idx)
            active -= 1

    step = 0
    if cfg.mode == "sm-i":
        while unfinished:
            pool = eligible(set())
            emit(pool[int(rng.integers(0, len(pool)))], step)
            step += 1
        return emits

    # mm-i
    while unfinished:
        k = int(rng.integers(1, min(cfg.max_batch, len(unfinished)) + 1))
        chosen: set[int] = set()
        for _ in range(k):
            pool = eligible(chosen)
            if not pool:
                break
            idx = pool[int(rng.integers(0, len(pool)))]
            chosen.add(idx)
            if not started[idx]:
                started[idx] = True
                active += 1
        for idx in sorted(chosen):
            # emit() re-checks started; flag already set above
            emits[idx].append(step)
            remaining[idx] -= 1
            if remaining[idx] == 0:
                unfinished.remove(idx)
                active -= 1
        step += 1
    return emits


def generate(
    gt: GroundTruth | Iterable[Sequence[Message]], config: GenConfig
) -> tuple[TraceSet, GenMetadata]:
    """Generate ``config.num_traces`` traces executing the ground truth.

    Deterministic: each trace draws from a generator seeded with
    ``seed XOR trace_index``, so runs are reproducible bit for bit and
    traces are independent of how many of them are requested.
    """
    if isinstance(gt, GroundTruth):
        paths = tuple(gt.sequences)
    else:
        paths = tuple(tuple(p) for p in gt)
    if not paths:
        raise ValueError("ground truth must contain at least one sequence")
    for p in paths:
        if not p:
            raise ValueError("ground-truth sequences must be non-empty")

    pool_paths = [pi for pi in range(len(paths)) for _ in range(config.instances_per_pattern)]
    lengths = [len(paths[pi]) for pi in pool_paths]

    traces: list[Trace] = []
    records: list[TraceRecord] = []
    for ti in range(config.num_traces):
        rng = np.random.default_rng((config.seed ^ ti) & _MASK64)
        emits = _schedule(lengths, config, rng)
        intervals = [(e[0], e[-1]) for e in emits]
        if config.address_mode == "per-instance":
            addresses: list[int | None] = list(assign_addresses(intervals, config.address_pool))
        else:
            addresses = [None] * len(pool_paths)

        tid = f"t{ti}"
        num_steps = 1 + max(iv[1] for iv in intervals)
        steps: list[list[MessageInstance]] = [[] for _ in range(num_steps)]
        recs = []
        for k, pi in enumerate(pool_paths):
            iid = f"{tid}.i{k}"
            for mi, s in enumerate(emits[k]):
                steps[s].append(MessageInstance(paths[pi][mi], addresses[k], iid))
            recs.append(
                InstanceRecord(iid, pi, addresses[k], intervals[k][0], intervals[k][1])
            )
        traces.append(Trace(tuple(tuple(s) for s in steps), trace_id=tid))
        records.append(TraceRecord(tid, tuple(recs)))

    return TraceSet(tuple(traces)), GenMetadata(config, paths, tuple(records))

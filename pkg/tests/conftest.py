"""Shared fixtures and tiny builders for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from msgflow.model import Message, MessageInstance, Trace, TraceSet


def M(src: str, dest: str, cmd: str) -> Message:
    return Message(src, dest, cmd)


def msgs(*cmds: str) -> list[Message]:
    """Messages on a single fake component pair, one per command name."""
    return [Message("u", "v", c) for c in cmds]


def linear_trace(seq, tid: str = "t", repeat: int = 1) -> Trace:
    """One message per step, the sequence repeated back to back."""
    steps = tuple(
        (MessageInstance(m),) for _ in range(repeat) for m in seq
    )
    return Trace(steps, trace_id=tid)


def step_trace(steps, tid: str = "t") -> Trace:
    """steps: iterable of iterables of Message or (Message, address)."""
    built = []
    for step in steps:
        insts = []
        for entry in step:
            if isinstance(entry, tuple):
                insts.append(MessageInstance(entry[0], address=entry[1]))
            else:
                insts.append(MessageInstance(entry))
        built.append(tuple(insts))
    return Trace(tuple(built), trace_id=tid)


def traces(*ts: Trace) -> TraceSet:
    return TraceSet(tuple(ts))


def random_steps(rng: np.random.Generator, alphabet, max_steps: int,
                 max_per_step: int = 1) -> list[list[Message]]:
    n = int(rng.integers(1, max_steps + 1))
    out = []
    for _ in range(n):
        k = int(rng.integers(1, max_per_step + 1))
        out.append([alphabet[int(rng.integers(len(alphabet)))] for _ in range(k)])
    return out


@pytest.fixture
def abc():
    return msgs("a", "b", "c")

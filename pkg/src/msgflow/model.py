"""Core value types shared across the mining pipeline.

A message is a static (source, destination, command) triple; an execution
emits message *instances*.  Traces are sequences of steps, where each step
is the multiset of instances observed at the same time: ordering is defined
across steps, never within one.  Patterns are sequences of distinct
messages mined from traces.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Iterator, Mapping

# ':' separates triple fields, ';' instances, '@' addresses; '#' and '='
# mark comment/separator lines in the trace file format.  None of them can
# appear inside a token or serialization stops being invertible.
_TOKEN = re.compile(r"[^\s:;@#=]+\Z")

CAUSALITY_RULES = ("dest-src", "src-dest", "off")


def _check_token(name: str, value: str) -> None:
    if not isinstance(value, str) or _TOKEN.fullmatch(value) is None:
        raise ValueError(
            f"{name} must be a non-empty token with no whitespace or ':;@#=', got {value!r}"
        )


@total_ordering
@dataclass(frozen=True, slots=True)
class Message:
    """A (src, dest, cmd) triple; the unit of the mining alphabet."""

    src: str
    dest: str
    cmd: str

    def __post_init__(self) -> None:
        _check_token("src", self.src)
        _check_token("dest", self.dest)
        _check_token("cmd", self.cmd)

    def canonical(self) -> str:
        return f"{self.src}:{self.dest}:{self.cmd}"

    def __str__(self) -> str:
        return self.canonical()

    def __lt__(self, other: "Message") -> bool:
        # Ordering is defined on the canonical rendering, not field tuples;
        # the two disagree when a token contains characters below ':'.
        if not isinstance(other, Message):
            return NotImplemented
        return self.canonical() < other.canonical()


def canonical_render(message: Message) -> str:
    """Render a message as the canonical ``src:dest:cmd`` token."""
    return message.canonical()


def parse_message(text: str) -> Message:
    """Invert :func:`canonical_render`."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected src:dest:cmd, got {text!r}")
    return Message(parts[0], parts[1], parts[2])


def is_causal(m1: Message, m2: Message, rule: str = "dest-src") -> bool:
    """Whether m2 can be a component's reaction to m1.

    ``dest-src`` (default): the receiver of m1 is the sender of m2, i.e. a
    component only emits in reaction to something it received.  ``src-dest``
    keeps the inverted reading selectable for comparison runs; ``off``
    disables the structural filter entirely.
    """
    if rule == "dest-src":
        return m1.dest == m2.src
    if rule == "src-dest":
        return m1.src == m2.dest
    if rule == "off":
        return True
    raise ValueError(f"unknown causality rule {rule!r}; expected one of {CAUSALITY_RULES}")


@dataclass(frozen=True, slots=True)
class MessageInstance:
    """One observed emission of a message, optionally tagged with the
    transaction address it travelled under.

    ``instance_id`` is generator bookkeeping only: it is excluded from
    equality and never serialized into trace files.
    """

    message: Message
    address: int | None = None
    instance_id: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.address is not None:
            if not isinstance(self.address, int) or isinstance(self.address, bool) or self.address < 0:
                raise ValueError(f"address must be a non-negative int, got {self.address!r}")

    def render(self) -> str:
        if self.address is None:
            return self.message.canonical()
        return f"{self.message.canonical()}@{self.address}"

    def __str__(self) -> str:
        return self.render()


def _instance_key(inst: MessageInstance) -> tuple:
    return (
        inst.message.canonical(),
        -1 if inst.address is None else inst.address,
        inst.instance_id or "",
    )


@dataclass(frozen=True, slots=True)
class Trace:
    """A sequence of steps, each a non-empty multiset of instances.

    Steps are stored in a canonical intra-step order so that value equality
    is multiset equality; intra-step order carries no meaning.
    """

    steps: tuple[tuple[MessageInstance, ...], ...]
    trace_id: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        norm = []
        for i, step in enumerate(self.steps):
            items = tuple(sorted(step, key=_instance_key))
            if not items:
                raise ValueError(f"step {i} is empty; every step must hold at least one instance")
            for inst in items:
                if not isinstance(inst, MessageInstance):
                    raise TypeError(f"step {i} holds {inst!r}, expected MessageInstance")
            norm.append(items)
        object.__setattr__(self, "steps", tuple(norm))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[tuple[MessageInstance, ...]]:
        return iter(self.steps)

    def instances(self) -> Iterator[MessageInstance]:
        for step in self.steps:
            yield from step

    def messages(self) -> Iterator[Message]:
        for step in self.steps:
            for inst in step:
                yield inst.message

    def precedes(self, i: int, j: int) -> bool:
        """True iff step i happens before step j.  Same-step indices are
        never ordered."""
        n = len(self.steps)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"step index out of range: ({i}, {j}) for {n} steps")
        return i < j


def precedes(trace: Trace, i: int, j: int) -> bool:
    return trace.precedes(i, j)


@dataclass(frozen=True, slots=True)
class TraceSet:
    """An ordered collection of traces plus the derived alphabet."""

    traces: tuple[Trace, ...]
    alphabet: frozenset[Message] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        traces = tuple(self.traces)
        for t in traces:
            if not isinstance(t, Trace):
                raise TypeError(f"expected Trace, got {t!r}")
        object.__setattr__(self, "traces", traces)
        alpha = frozenset(m for t in traces for m in t.messages())
        object.__setattr__(self, "alphabet", alpha)

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[Trace]:
        return iter(self.traces)

    def __getitem__(self, i: int) -> Trace:
        return self.traces[i]


def as_trace_set(obj: TraceSet | Trace | Iterable[Trace]) -> TraceSet:
    """Coerce a Trace, an iterable of traces, or a TraceSet to a TraceSet."""
    if isinstance(obj, TraceSet):
        return obj
    if isinstance(obj, Trace):
        return TraceSet((obj,))
    return TraceSet(tuple(obj))


@dataclass(frozen=True, slots=True)
class Pattern:
    """A sequence of at least two pairwise distinct messages.

    Equality and hashing consider only the message sequence; ``origin``
    ("C" forward-confident, "R" backward-confident, "CR" both, "ALT"
    baseline) and ``support_stats`` are carried along as annotations.
    """

    messages: tuple[Message, ...]
    origin: str = field(default="", compare=False)
    support_stats: Mapping[str, float] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        msgs = tuple(self.messages)
        if len(msgs) < 2:
            raise ValueError(f"pattern needs at least 2 messages, got {len(msgs)}")
        if len(set(msgs)) != len(msgs):
            raise ValueError(f"pattern repeats a message: {[str(m) for m in msgs]}")
        object.__setattr__(self, "messages", msgs)

    @classmethod
    def validated(
        cls,
        messages: Iterable[Message],
        *,
        origin: str = "",
        causality: str = "dest-src",
        support_stats: Mapping[str, float] | None = None,
    ) -> "Pattern":
        """Construct a pattern, additionally rejecting any consecutive pair
        that violates the configured structural-causality rule."""
        pat = cls(tuple(messages), origin, support_stats)
        for a, b in zip(pat.messages, pat.messages[1:]):
            if not is_causal(a, b, causality):
                raise ValueError(
                    f"non-causal consecutive pair {a} -> {b} under rule {causality!r}"
                )
        return pat

    def __len__(self) -> int:
        return len(self.messages)

    def __iter__(self) -> Iterator[Message]:
        return iter(self.messages)

    def __str__(self) -> str:
        return " -> ".join(m.canonical() for m in self.messages)

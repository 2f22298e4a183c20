"""Flow definitions: DAGs of messages with one start and explicit terminals.

A flow describes every legal execution of one transaction type.  Nodes are
messages, edges are direct successions, and branches model alternatives
(never fork-join).  The ground truth used for evaluation is the set of
root-to-terminal paths of all flows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .model import Message, Pattern, canonical_render


class FlowSpecError(ValueError):
    """Raised for structurally invalid or malformed flow documents."""


@dataclass(frozen=True)
class FlowSpec:
    """A validated flow DAG.  ``messages`` maps document-local ids to
    messages; ``edges`` keeps document order, which fixes path order."""

    name: str
    messages: Mapping[str, Message]
    edges: tuple[tuple[str, str], ...]
    start: str
    terminals: frozenset[str]

    def successors(self, node: str) -> list[str]:
        return [b for a, b in self.edges if a == node]


def _validate_flow(flow: FlowSpec) -> None:
    ids = set(flow.messages)
    if not ids:
        raise FlowSpecError(f"flow {flow.name!r}: no messages")
    if flow.start not in ids:
        raise FlowSpecError(f"flow {flow.name!r}: unknown start {flow.start!r}")
    if not flow.terminals:
        raise FlowSpecError(f"flow {flow.name!r}: needs at least one terminal")
    for t in flow.terminals:
        if t not in ids:
            raise FlowSpecError(f"flow {flow.name!r}: unknown terminal {t!r}")
    adj: dict[str, list[str]] = {i: [] for i in ids}
    for a, b in flow.edges:
        if a not in ids or b not in ids:
            raise FlowSpecError(f"flow {flow.name!r}: edge ({a!r}, {b!r}) references unknown id")
        adj[a].append(b)

    # cycle check: depth-first with colors
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}

    def visit(node: str) -> None:
        color[node] = GRAY
        for nxt in adj[node]:
            if color[nxt] == GRAY:
                raise FlowSpecError(f"flow {flow.name!r}: cycle through {nxt!r}")
            if color[nxt] == WHITE:
                visit(nxt)
        color[node] = BLACK

    for i in ids:
        if color[i] == WHITE:
            visit(i)

    reachable = set()
    frontier = [flow.start]
    while frontier:
        node = frontier.pop()
        if node in reachable:
            continue
        reachable.add(node)
        frontier.extend(adj[node])
    unreachable = ids - reachable
    if unreachable:
        raise FlowSpecError(
            f"flow {flow.name!r}: unreachable from start: {sorted(unreachable)}"
        )
    for i in ids:
        if not adj[i] and i not in flow.terminals:
            raise FlowSpecError(
                f"flow {flow.name!r}: {i!r} has no successors but is not a terminal"
            )


def parse_flow_spec(doc: Mapping, *, name: str | None = None) -> FlowSpec:
    """Build and validate one FlowSpec from a mapping with keys
    ``name``, ``messages``, ``edges``, ``start``, ``terminals``."""
    if not isinstance(doc, Mapping):
        raise FlowSpecError(f"flow document must be a mapping, got {type(doc).__name__}")
    try:
        flow_name = name if name is not None else doc["name"]
        raw_messages = doc["messages"]
        raw_edges = doc["edges"]
        start = doc["start"]
        terminals = doc["terminals"]
    except KeyError as exc:
        raise FlowSpecError(f"flow document missing key {exc.args[0]!r}") from None

    messages: dict[str, Message] = {}
    for mid, fields in raw_messages.items():
        try:
            messages[mid] = Message(fields["src"], fields["dest"], fields["cmd"])
        except (KeyError, TypeError) as exc:
            raise FlowSpecError(f"flow {flow_name!r}: bad message {mid!r}: {exc}") from None
        except ValueError as exc:
            raise FlowSpecError(f"flow {flow_name!r}: bad message {mid!r}: {exc}") from None

    edges = []
    for e in raw_edges:
        if len(e) != 2:
            raise FlowSpecError(f"flow {flow_name!r}: edge {e!r} is not a pair")
        edges.append((e[0], e[1]))

    flow = FlowSpec(
        name=str(flow_name),
        messages=messages,
        edges=tuple(edges),
        start=str(start),
        terminals=frozenset(str(t) for t in terminals),
    )
    _validate_flow(flow)
    return flow


def parse_flow_library(doc: Mapping) -> list[FlowSpec]:
    """Parse a library document: ``{"flows": [<flow>, ...]}``."""
    if not isinstance(doc, Mapping) or "flows" not in doc:
        raise FlowSpecError('flow library must be a mapping with a "flows" list')
    flows = [parse_flow_spec(f) for f in doc["flows"]]
    if not flows:
        raise FlowSpecError("flow library is empty")
    names = [f.name for f in flows]
    if len(set(names)) != len(names):
        raise FlowSpecError(f"duplicate flow names: {names}")
    return flows


def enumerate_paths(flow: FlowSpec) -> tuple[tuple[Message, ...], ...]:
    """All root-to-terminal paths, in depth-first edge-insertion order.

    A path stops at any terminal it reaches; terminals with successors
    contribute both the stopped path and every continuation.
    """
    paths: list[tuple[Message, ...]] = []

    def walk(node: str, acc: list[str]) -> None:
        acc.append(node)
        if node in flow.terminals:
            paths.append(tuple(flow.messages[i] for i in acc))
        for nxt in flow.successors(node):
            walk(nxt, acc)
        acc.pop()

    walk(flow.start, [])
    return tuple(paths)


@dataclass(frozen=True)
class GroundTruth:
    """The deduplicated union of root-to-terminal paths over a flow set.

    ``labels`` holds a human-readable provenance tag per sequence
    (``flowname[k]`` for the k-th path of that flow, first occurrence wins).
    """

    sequences: tuple[tuple[Message, ...], ...]
    labels: tuple[str, ...] = ()
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        seqs = tuple(tuple(s) for s in self.sequences)
        if len(set(seqs)) != len(seqs):
            raise ValueError("ground truth sequences must be unique")
        labels = tuple(self.labels) if self.labels else tuple(f"gt[{i}]" for i in range(len(seqs)))
        if len(labels) != len(seqs):
            raise ValueError("labels and sequences length mismatch")
        object.__setattr__(self, "sequences", seqs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", frozenset(seqs))

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[tuple[Message, ...]]:
        return iter(self.sequences)

    def __contains__(self, seq) -> bool:
        return tuple(seq) in self._index


def ground_truth(flows: FlowSpec | Iterable[FlowSpec]) -> GroundTruth:
    """Union the paths of one or more flows into a GroundTruth."""
    if isinstance(flows, FlowSpec):
        flows = [flows]
    seqs: list[tuple[Message, ...]] = []
    labels: list[str] = []
    seen = set()
    for flow in flows:
        for k, path in enumerate(enumerate_paths(flow)):
            if path in seen:
                continue
            seen.add(path)
            seqs.append(path)
            labels.append(f"{flow.name}[{k}]")
    return GroundTruth(tuple(seqs), tuple(labels))


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(obj: FlowSpec | Iterable[Pattern], *, name: str | None = None) -> str:
    """Render a flow or a pattern set as a Graphviz digraph.

    Nodes are named by the canonical message rendering; pattern edges are
    the union of consecutive pairs across all patterns.
    """
    if isinstance(obj, FlowSpec):
        graph_name = name or obj.name
        nodes = sorted(canonical_render(m) for m in obj.messages.values())
        edges = [
            (canonical_render(obj.messages[a]), canonical_render(obj.messages[b]))
            for a, b in obj.edges
        ]
    else:
        graph_name = name or "patterns"
        patterns = list(obj)
        node_set = {canonical_render(m) for p in patterns for m in p.messages}
        edge_set = {
            (canonical_render(a), canonical_render(b))
            for p in patterns
            for a, b in zip(p.messages, p.messages[1:])
        }
        nodes = sorted(node_set)
        edges = sorted(edge_set)

    lines = [f"digraph {_dot_quote(graph_name)} {{"]
    for n in nodes:
        lines.append(f"  {_dot_quote(n)};")
    for a, b in edges:
        lines.append(f"  {_dot_quote(a)} -> {_dot_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Bundled flow libraries for experiments and tests.

Three corpora ship with the package: a single branchy CPU write flow, a
two-flow pair sharing one hub message, and a ten-flow library whose
memory messages are shared across flows (which is what defeats global
alternation checks and motivates per-address slicing).
"""
from __future__ import annotations

import json
from importlib import resources

from .flows import FlowSpec, parse_flow_library

__all__ = [
    "available",
    "fixture_path",
    "load_flows",
    "load_cpu_write",
    "load_shared_hub",
    "load_soc_flows",
]

_FILES = {
    "cpu_write": "cpu_write_flow.json",
    "shared_hub": "shared_hub_flows.json",
    "soc10": "soc_flows_10.json",
}


def available() -> list[str]:
    return sorted(_FILES)


def fixture_path(name: str):
    """Path of a bundled flow library, usable as a CLI --flows argument."""
    if name not in _FILES:
        raise KeyError(f"unknown fixture {name!r}; available: {available()}")
    return resources.files("msgflow").joinpath("data", _FILES[name])


def load_flows(name: str) -> list[FlowSpec]:
    with fixture_path(name).open("r", encoding="utf-8") as fh:
        return parse_flow_library(json.load(fh))


def load_cpu_write() -> list[FlowSpec]:
    """One CPU write flow: 8 messages, a cache-hit shortcut, a snoop
    branch, and a memory-fetch branch (3 root-to-terminal paths)."""
    return load_flows("cpu_write")


def load_shared_hub() -> list[FlowSpec]:
    """Two linear flows (a, b, c) and (x, b, y) sharing the hub message
    b; chaining them past b needs the evidence rule."""
    return load_flows("shared_hub")


def load_soc_flows() -> list[FlowSpec]:
    """Ten flows, 16 ground-truth paths; memory fetch messages are shared
    across the write, read, and DMA flows."""
    return load_flows("soc10")

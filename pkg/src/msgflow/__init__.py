"""Mining of sequential message flows from concurrent execution traces.

The pipeline: slice traces by transaction address, mine binary patterns
whose forward or backward confidence holds across traces, chain them
into longer sequences, prune redundant ones, and score the result
against ground-truth flows.  A synthetic trace generator and an
alternation-based reference miner round out the evaluation loop.
"""
from .baseline import AlternatingMiner, ConcurrentStepError, chain_alternating, mine_alternating
from .chaining import chain_overlap, chain_patterns, close_backward, close_forward, extend_backward
from .evaluation import (
    EvalReport,
    PatternVerdict,
    evaluate,
    find_witness,
    is_valid,
    length_histogram,
    precision,
    recall,
)
from .flows import (
    FlowSpec,
    FlowSpecError,
    GroundTruth,
    enumerate_paths,
    export_dot,
    ground_truth,
    parse_flow_library,
    parse_flow_spec,
)
from .generator import (
    GenConfig,
    GenMetadata,
    InstanceRecord,
    PoolExhaustedError,
    TraceRecord,
    assign_addresses,
    generate,
)
from .miner import PatternMiner, mine
from .mining import (
    SupportTable,
    backward_confidence,
    forward_confidence,
    message_support,
    mine_binary,
    sequence_support,
    set_backward_confidence,
    set_forward_confidence,
)
from .model import (
    CAUSALITY_RULES,
    Message,
    MessageInstance,
    Pattern,
    Trace,
    TraceSet,
    as_trace_set,
    canonical_render,
    is_causal,
    parse_message,
    precedes,
)
from .postprocess import merge_patterns, remove_redundant
from .slicing import SLICE_POLICIES, TraceSlicer, slice_trace, slice_traces

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Message",
    "MessageInstance",
    "Trace",
    "TraceSet",
    "Pattern",
    "CAUSALITY_RULES",
    "as_trace_set",
    "canonical_render",
    "parse_message",
    "is_causal",
    "precedes",
    "FlowSpec",
    "FlowSpecError",
    "GroundTruth",
    "parse_flow_spec",
    "parse_flow_library",
    "enumerate_paths",
    "ground_truth",
    "export_dot",
    "SupportTable",
    "message_support",
    "sequence_support",
    "forward_confidence",
    "backward_confidence",
    "set_forward_confidence",
    "set_backward_confidence",
    "mine_binary",
    "chain_overlap",
    "close_forward",
    "close_backward",
    "extend_backward",
    "chain_patterns",
    "remove_redundant",
    "merge_patterns",
    "PatternMiner",
    "mine",
    "AlternatingMiner",
    "ConcurrentStepError",
    "mine_alternating",
    "chain_alternating",
    "SLICE_POLICIES",
    "TraceSlicer",
    "slice_trace",
    "slice_traces",
    "GenConfig",
    "GenMetadata",
    "InstanceRecord",
    "TraceRecord",
    "PoolExhaustedError",
    "assign_addresses",
    "generate",
    "EvalReport",
    "PatternVerdict",
    "evaluate",
    "find_witness",
    "is_valid",
    "precision",
    "recall",
    "length_histogram",
]

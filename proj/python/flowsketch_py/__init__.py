"""Python bindings for the flowsketch C++ library."""

try:
    from ._flowsketch import (
        FlowKey,
        FlowRecord,
        HashFlowSketch,
        generate_trace,
        linear_counting,
        multihash_model,
        pipelined_model,
        run_config,
        structure_sizes,
    )
except ImportError:  # extension built out-of-package (plain CMake build)
    from _flowsketch import (
        FlowKey,
        FlowRecord,
        HashFlowSketch,
        generate_trace,
        linear_counting,
        multihash_model,
        pipelined_model,
        run_config,
        structure_sizes,
    )

__all__ = [
    "FlowKey",
    "FlowRecord",
    "HashFlowSketch",
    "generate_trace",
    "linear_counting",
    "multihash_model",
    "pipelined_model",
    "run_config",
    "structure_sizes",
]

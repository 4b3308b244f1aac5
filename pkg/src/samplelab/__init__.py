"""samplelab: a workbench for exploring text-generation sampling hyperparameters.

The core pipeline is penalty reweighting -> renormalization -> nucleus
filtering -> a seeded token draw, run in a loop against a pluggable
next-token-distribution provider. Around it sit a durable interaction log,
an HTTP service for the web UI, and offline reporting.
"""

from samplelab.sampling import (
    RNG_ALGORITHM,
    AllZeroWeightsError,
    EmptyPoolError,
    GenerationResult,
    NucleusSet,
    ParameterRangeError,
    SamplingParams,
    TokenDistribution,
    TokenHistory,
    apply_penalties,
    generate_sequence,
    nucleus_filter,
    renormalize,
    sample_token,
)

__version__ = "0.1.0"

__all__ = [
    "RNG_ALGORITHM",
    "AllZeroWeightsError",
    "EmptyPoolError",
    "GenerationResult",
    "NucleusSet",
    "ParameterRangeError",
    "SamplingParams",
    "TokenDistribution",
    "TokenHistory",
    "apply_penalties",
    "generate_sequence",
    "nucleus_filter",
    "renormalize",
    "sample_token",
    "__version__",
]

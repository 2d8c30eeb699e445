"""Passive probe-request people tracking: python bindings over the C++ core."""

from ._core import (
    SenseflowError,
    canonical_targets,
    density,
    detection_error,
    lcs,
    lcs_length,
    matches_trajectory,
    observed_trajectory,
    recognize_trajectory,
    run_agent,
    run_pipeline,
    simulate,
    tracking_accuracy,
)
from ._core import __version__

__all__ = [
    "SenseflowError",
    "canonical_targets",
    "density",
    "detection_error",
    "lcs",
    "lcs_length",
    "matches_trajectory",
    "observed_trajectory",
    "recognize_trajectory",
    "run_agent",
    "run_pipeline",
    "simulate",
    "tracking_accuracy",
    "__version__",
]

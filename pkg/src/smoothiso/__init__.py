"""Smooth isotonic estimation of monotone curves and the L_p errors of the
resulting estimators: kernel, smoothed Grenander and isotonized kernel
estimators, their limiting constants, Monte-Carlo checks and a bootstrap
test of monotonicity."""

from __future__ import annotations

from .core import (
    ModelSpec,
    MonotoneFunction,
    Sample,
    StepFunction,
    builtin_function,
    cumulative_step,
    density_model,
    regression_model,
)
from .estimators import DesignPlan, isotonized_kernel, kernel_estimator, smoothed_grenander
from .kernel import get_kernel
from .lcm import least_concave_majorant

__version__ = "0.1.0"

__all__ = [
    "DesignPlan",
    "ModelSpec",
    "MonotoneFunction",
    "Sample",
    "StepFunction",
    "builtin_function",
    "cumulative_step",
    "density_model",
    "get_kernel",
    "isotonized_kernel",
    "kernel_estimator",
    "least_concave_majorant",
    "regression_model",
    "smoothed_grenander",
]

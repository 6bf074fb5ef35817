"""Simulation and identification of three-member fractional-order systems."""

from .core import (
    FULL_MEMORY,
    GlWeights,
    MemoryPolicy,
    ModelParameters,
    SampledSeries,
    balance_residual,
    fractional_derivative,
    gl_weights,
    simulate,
    steady_state_gain,
)
from .errors import *  # noqa: F401,F403
from .identify import (
    IdentificationResult,
    LinearFitResult,
    SearchConfig,
    approximation_criterion,
    fit_linear_coefficients,
    identify,
    solve_normal_equations,
)
from .kernels import BACKEND

__version__ = "0.1.0"

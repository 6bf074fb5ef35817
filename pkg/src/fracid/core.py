"""Grünwald-Letnikov differentiation and the three-member fractional model.

The model is

    a2 * D^alpha y(t) + a1 * D^beta y(t) + a0 * y(t) = u(t),  y(0) = 0,

discretised on a uniform grid t_m = m*h with the GL sum

    D^q y(t_m) ~ h^-q * sum_{j=0}^{N(t_m)} b_j(q) * y_{m-j},
    b_j(q) = (-1)^j * binom(q, j),

and N(t) = min(floor(t/h), floor(L/h)) for a memory length L.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import DegenerateDenominator, InvalidMemory, InvalidModel, InvalidSeries, ZeroA0

#: Relative slack when flooring L/h, so L = 0.3, h = 0.1 gives 3 and not 2.
_FLOOR_SLACK = 1e-9
_DENOM_RTOL = 1e-14


@dataclass(frozen=True)
class ModelParameters:
    """Coefficients and derivative orders of the three-member model.

    A two-member model is ``a2 == 0``; its ``alpha`` may then be ``None``.
    """

    a2: float
    a1: float
    a0: float
    alpha: Optional[float]
    beta: float

    def __post_init__(self):
        for name in ("a2", "a1", "a0", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidModel(f"{name} must be finite, got {getattr(self, name)!r}")
        if self.beta < 0:
            raise InvalidModel(f"beta must be >= 0, got {self.beta}")
        if self.alpha is None:
            if self.a2 != 0:
                raise InvalidModel("alpha may only be omitted for a two-member model (a2 == 0)")
        elif not math.isfinite(self.alpha) or self.alpha <= self.beta:
            raise InvalidModel(f"need alpha > beta, got alpha={self.alpha}, beta={self.beta}")

    @classmethod
    def two_member(cls, a1, a0, beta):
        return cls(0.0, a1, a0, None, beta)

    @property
    def is_two_member(self):
        return self.a2 == 0


@dataclass(frozen=True, eq=False)
class SampledSeries:
    """Uniformly sampled signal, ``values[m]`` taken at ``t = m * step``."""

    step: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise InvalidSeries("series values must be one-dimensional")
        if not (math.isfinite(self.step) and self.step > 0):
            raise InvalidSeries(f"step must be positive, got {self.step!r}")
        if values.shape[0] < 3:
            raise InvalidSeries(f"series needs at least 3 samples, got {values.shape[0]}")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]

    @property
    def times(self):
        return self.step * np.arange(len(self))

    @property
    def horizon(self):
        return self.step * (len(self) - 1)

    @classmethod
    def unit_step(cls, step, horizon):
        """Unit step sampled on [0, horizon], value 1 from m = 0 on."""
        n = int(math.floor(horizon / step + _FLOOR_SLACK)) + 1
        return cls(step, np.ones(n))

    def with_values(self, values):
        return SampledSeries(self.step, values)


@dataclass(frozen=True, eq=False)
class GlWeights:
    order: float
    weights: np.ndarray = field(repr=False)

    def __len__(self):
        return self.weights.shape[0]


@dataclass(frozen=True)
class MemoryPolicy:
    """How much history the GL sums use.

    ``full`` sums over the whole record; ``truncated`` keeps only the last
    ``length`` time units.
    """

    mode: str = "full"
    length: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ("full", "truncated"):
            raise InvalidMemory(f"unknown memory mode {self.mode!r}")
        if self.mode == "truncated":
            if self.length is None or not self.length > 0:
                raise InvalidMemory("truncated memory needs a positive length")

    @classmethod
    def full(cls):
        return cls("full")

    @classmethod
    def truncated(cls, length):
        return cls("truncated", length)

    def max_lag(self, step, n):
        """Largest lag j entering the sums for a record of ``n`` samples."""
        if self.mode == "full":
            return n - 1
        if self.length < step * (1 - _FLOOR_SLACK):
            raise InvalidMemory(f"memory length {self.length} is shorter than one step {step}")
        return min(n - 1, int(math.floor(self.length / step + _FLOOR_SLACK)))


FULL_MEMORY = MemoryPolicy.full()


def gl_weights(order, count):
    """Return GL weights b_0..b_count for the given derivative order.

    Computed by the recurrence b_j = b_{j-1} * (1 - (order + 1) / j), which
    equals (-1)^j binom(order, j) without forming factorials.
    """
    count = int(count)
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    order = float(order)
    return GlWeights(order, kernels.gl_weights(order, count))


def _check_memory(memory):
    if memory is None:
        return FULL_MEMORY
    return memory


def fractional_derivative(signal, order, memory=None):
    """GL derivative of ``signal`` of the given order, same grid and length."""
    memory = _check_memory(memory)
    n = len(signal)
    lag = memory.max_lag(signal.step, n)
    b = kernels.gl_weights(float(order), lag)
    d = kernels.causal_convolve(b, signal.values)
    return signal.with_values(d * signal.step ** (-order))


def combined_weights(model, step, lag):
    """Weights w_j = a2 h^-alpha b_j + a1 h^-beta c_j of the lagged terms.

    Also returns the list of term magnitudes that make up w_0 + a0, used to
    judge whether the recursion denominator is degenerate.
    """
    scale_b = model.a1 * step ** (-model.beta)
    w = scale_b * kernels.gl_weights(model.beta, lag)
    terms = [abs(scale_b), abs(model.a0)]
    if not model.is_two_member:
        scale_a = model.a2 * step ** (-model.alpha)
        w += scale_a * kernels.gl_weights(model.alpha, lag)
        terms.append(abs(scale_a))
    return w, terms


def simulate(model, input, memory=None):
    """Solve the model for the sampled ``input`` with the explicit GL recursion.

    y_0 = y_1 = 0; for m >= 2

        y_m = (u_m - sum_{j>=1} w_j y_{m-j}) / (w_0 + a0).

    ``u_0`` and ``u_1`` never enter the recursion.
    """
    memory = _check_memory(memory)
    n = len(input)
    lag = memory.max_lag(input.step, n)
    w, terms = combined_weights(model, input.step, lag)
    denom = w[0] + model.a0
    if not abs(denom) > _DENOM_RTOL * max(terms):
        raise DegenerateDenominator(
            f"recursion denominator a2*h^-alpha + a1*h^-beta + a0 = {denom:g} "
            f"vanishes for step {input.step:g}"
        )
    y = kernels.gl_recursion(w, denom, input.values, 2)
    return input.with_values(y)


def steady_state_gain(model):
    """Final value of the unit-step response, 1/a0, for a settling model."""
    if model.a0 == 0:
        raise ZeroA0("steady-state gain is undefined for a0 == 0")
    return 1.0 / model.a0


def balance_residual(model, output, input, memory=None):
    """Per-sample residual of the discrete model equation and its scale.

    Returns ``(residual, scale)`` where ``residual[m]`` is
    a2 D^alpha y_m + a1 D^beta y_m + a0 y_m - u_m and ``scale[m]`` is the sum
    of the magnitudes of the four terms.
    """
    terms = [model.a1 * fractional_derivative(output, model.beta, memory).values,
             model.a0 * output.values,
             -input.values]
    if not model.is_two_member:
        terms.append(model.a2 * fractional_derivative(output, model.alpha, memory).values)
    residual = np.sum(terms, axis=0)
    scale = np.sum(np.abs(terms), axis=0)
    return residual, scale

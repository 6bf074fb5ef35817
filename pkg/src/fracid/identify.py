"""Parameter identification for the three-member fractional model.

For fixed orders (alpha, beta) the coefficients (a2, a1, a0) are linear in
the model equation and come from least squares on the equation error,
solved through the 3x3 normal equations. The orders themselves are found by
passive search: split the order intervals into subintervals, evaluate the
midpoints, zoom in on the best one, repeat.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .core import FULL_MEMORY, ModelParameters, simulate
from .errors import (
    DegenerateDenominator,
    InvalidConfig,
    InvalidModel,
    LengthMismatch,
    NoFeasibleCandidate,
    SingularNormalMatrix,
)

MODEL_KINDS = ("three_member", "two_member", "fixed_orders")

SINGULAR_RTOL = 1e-12
#: Orders closer than this make the alpha and beta columns identical.
ORDER_COLLISION = 1e-9
#: Refinement keeps the winner plus one neighbour on each side, so fewer
#: than four subintervals would never shrink the interval.
MIN_REFINE_DIVISIONS = 4


@dataclass(frozen=True)
class LinearFitResult:
    a2: float
    a1: float
    a0: float
    residual_norm: float
    alpha: Optional[float] = None
    beta: Optional[float] = None

    def model(self):
        if self.a2 == 0 and self.alpha is None:
            return ModelParameters.two_member(self.a1, self.a0, self.beta)
        return ModelParameters(self.a2, self.a1, self.a0, self.alpha, self.beta)


def _check_aligned(a, b):
    if len(a) != len(b):
        raise LengthMismatch(f"series lengths differ: {len(a)} vs {len(b)}")
    if not math.isclose(a.step, b.step, rel_tol=1e-9):
        raise LengthMismatch(f"series steps differ: {a.step!r} vs {b.step!r}")


def solve_normal_equations(matrix, rhs, rtol=SINGULAR_RTOL):
    """Solve a small symmetric positive semidefinite system.

    The system is first equilibrated to unit diagonal, then solved by
    Gaussian elimination with partial pivoting. Raises SingularNormalMatrix
    when a pivot falls below ``rtol`` times the largest pivot.
    """
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = b.shape[0]
    diag = np.diag(a).copy()
    if not np.all(diag > 0) or not np.all(np.isfinite(a)):
        raise SingularNormalMatrix("normal matrix has a zero column (no excitation)")
    d = np.sqrt(diag)
    a = a / np.outer(d, d)
    b = b / d

    largest = 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = abs(a[p, k])
        largest = max(largest, pivot)
        if pivot <= rtol * largest:
            raise SingularNormalMatrix(
                f"normal matrix is singular (pivot {pivot:.3g} at column {k})"
            )
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        for i in range(k + 1, n):
            lam = a[i, k] / a[k, k]
            if lam != 0.0:
                a[i, k:] -= lam * a[k, k:]
                b[i] -= lam * b[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - np.dot(a[k, k + 1:], x[k + 1:])) / a[k, k]
    return x / d


def normal_equations(columns, target):
    """Gram matrix and right-hand side of min || columns @ a - target ||^2.

    Entries are filled pairwise so the matrix is exactly symmetric.
    """
    k = len(columns)
    gram = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            gram[i, j] = gram[j, i] = np.dot(columns[i], columns[j])
    rhs = np.array([np.dot(c, target) for c in columns])
    return gram, rhs


def _fit_columns(d_alpha, d_beta, y, u, two_member):
    if two_member:
        cols = [d_beta, y]
    else:
        cols = [d_alpha, d_beta, y]
    gram, rhs = normal_equations(cols, u)
    coef = solve_normal_equations(gram, rhs)
    resid = sum(c * x for c, x in zip(coef, cols)) - u
    residual_norm = float(np.dot(resid, resid) / u.shape[0])
    if two_member:
        return 0.0, float(coef[0]), float(coef[1]), residual_norm
    return float(coef[0]), float(coef[1]), float(coef[2]), residual_norm


def _derivative(values, order, step, lag):
    b = kernels.gl_weights(float(order), lag)
    return kernels.causal_convolve(b, values) * step ** (-order)


def _check_kind(kind):
    if kind not in MODEL_KINDS:
        raise InvalidConfig(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def fit_linear_coefficients(output, input, alpha, beta, memory=None, kind="three_member"):
    """Least-squares coefficients for fixed derivative orders.

    ``kind="two_member"`` drops the alpha term (a2 = 0) and ``alpha`` is
    ignored.
    """
    memory = memory or FULL_MEMORY
    _check_kind(kind)
    _check_aligned(output, input)
    two_member = kind == "two_member"
    if not two_member:
        if abs(alpha - beta) <= ORDER_COLLISION:
            raise SingularNormalMatrix(
                f"alpha == beta == {alpha:g}: derivative columns are identical"
            )
        if alpha < beta:
            raise InvalidModel(f"need alpha > beta, got alpha={alpha}, beta={beta}")
    lag = memory.max_lag(output.step, len(output))
    y = output.values
    d_beta = _derivative(y, beta, output.step, lag)
    d_alpha = None if two_member else _derivative(y, alpha, output.step, lag)
    a2, a1, a0, res = _fit_columns(d_alpha, d_beta, y, input.values, two_member)
    return LinearFitResult(a2, a1, a0, res, None if two_member else float(alpha), float(beta))


def approximation_criterion(experimental, modeled):
    """Mean squared deviation between measured and modelled output."""
    _check_aligned(experimental, modeled)
    diff = experimental.values - modeled.values
    with np.errstate(over="ignore", invalid="ignore"):
        return float(np.dot(diff, diff) / diff.shape[0])


# ------------------------------------------------------------------ search

Interval = Tuple[float, float]


def _interval(value, name):
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise InvalidConfig(f"{name} must be a (min, max) pair, got {value!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidConfig(f"{name} bounds must be finite, got {value!r}")
    if lo > hi:
        raise InvalidConfig(f"{name} has min > max: {value!r}")
    return lo, hi


def divisions(interval, epsilon):
    """Subinterval count 2 * width / epsilon, rounded up, at least 1."""
    width = interval[1] - interval[0]
    return max(1, math.ceil(2.0 * width / epsilon - 1e-9))


@dataclass(frozen=True)
class SearchConfig:
    alpha_interval: Optional[Interval]
    beta_interval: Interval
    epsilon: float = 0.05
    accuracy: float = 1e-4
    max_rounds: int = 20
    model_kind: str = "three_member"
    restarts: Tuple[Tuple[Optional[Interval], Interval], ...] = ()

    def __post_init__(self):
        _check_kind(self.model_kind)
        two = self.model_kind == "two_member"
        pairs = [(self.alpha_interval, self.beta_interval)] + [tuple(p) for p in self.restarts]
        clean = []
        for i, pair in enumerate(pairs):
            if len(pair) != 2:
                raise InvalidConfig(f"restart {i} must be an (alpha_interval, beta_interval) pair")
            a_iv, b_iv = pair
            a_iv = None if two and a_iv is None else _interval(a_iv, "alpha_interval")
            b_iv = _interval(b_iv, "beta_interval")
            if b_iv[0] < 0:
                raise InvalidConfig(f"beta_interval must be nonnegative, got {b_iv}")
            if not two and a_iv[1] <= b_iv[0]:
                raise InvalidConfig(f"alpha_interval {a_iv} lies entirely below beta_interval {b_iv}")
            if self.model_kind == "fixed_orders" and (a_iv[0] != a_iv[1] or b_iv[0] != b_iv[1]):
                raise InvalidConfig("fixed_orders needs point intervals (min == max)")
            clean.append((a_iv, b_iv))
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidConfig(f"epsilon must be positive, got {self.epsilon!r}")
        if not (math.isfinite(self.accuracy) and self.accuracy > 0):
            raise InvalidConfig(f"accuracy must be positive, got {self.accuracy!r}")
        if int(self.max_rounds) != self.max_rounds or self.max_rounds < 1:
            raise InvalidConfig(f"max_rounds must be a positive integer, got {self.max_rounds!r}")
        object.__setattr__(self, "alpha_interval", clean[0][0])
        object.__setattr__(self, "beta_interval", clean[0][1])
        object.__setattr__(self, "restarts", tuple(clean[1:]))

    @property
    def starts(self):
        return ((self.alpha_interval, self.beta_interval),) + self.restarts

    def subinterval_counts(self, alpha_interval=None, beta_interval=None):
        """(n_alpha, n_beta) for the given (default: configured) intervals."""
        a_iv = alpha_interval or self.alpha_interval
        b_iv = beta_interval or self.beta_interval
        n_a = 1 if self.model_kind == "two_member" else divisions(a_iv, self.epsilon)
        return n_a, divisions(b_iv, self.epsilon)


@dataclass
class IdentificationResult:
    model: ModelParameters
    criterion: float
    rounds: int
    trace: List[Tuple[Optional[float], float, float]] = field(repr=False)
    restart_index: int = 0
    #: best (alpha, beta, Q) after each round of the winning start
    round_best: List[Tuple[Optional[float], float, float]] = field(default_factory=list)


class _Evaluator:
    """Scores candidate orders against one data record.

    Derivatives of the measured output are cached per order, since a
    search grid reuses each alpha and beta value many times.
    """

    def __init__(self, output, input, memory, two_member):
        _check_aligned(output, input)
        self.output = output
        self.input = input
        self.memory = memory
        self.two_member = two_member
        self.lag = memory.max_lag(output.step, len(output))
        self._cache = {}

    def derivative(self, order):
        d = self._cache.get(order)
        if d is None:
            d = _derivative(self.output.values, order, self.output.step, self.lag)
            self._cache[order] = d
        return d

    def prepare(self, orders):
        for q in orders:
            self.derivative(q)

    def __call__(self, alpha, beta):
        """Return (Q, fit) or None if the candidate is infeasible."""
        if not self.two_member and alpha - beta <= ORDER_COLLISION:
            return None
        d_alpha = None if self.two_member else self.derivative(alpha)
        try:
            with np.errstate(all="ignore"):
                a2, a1, a0, res = _fit_columns(
                    d_alpha, self.derivative(beta), self.output.values,
                    self.input.values, self.two_member)
            fit = LinearFitResult(a2, a1, a0, res, alpha, beta)
            model = fit.model()
            with np.errstate(all="ignore"):
                modeled = simulate(model, self.input, self.memory)
        except (SingularNormalMatrix, DegenerateDenominator, InvalidModel):
            return None
        q = approximation_criterion(self.output, modeled)
        if not math.isfinite(q):
            return None
        return q, fit


def _midpoints(lo, hi, n):
    if hi == lo:
        return [lo]
    w = (hi - lo) / n
    return [lo + (k + 0.5) * w for k in range(n)]


def _zoom(lo, hi, n, best, bound):
    """Winning subinterval plus one neighbour each side, clamped to ``bound``."""
    if hi == lo:
        return lo, hi
    w = (hi - lo) / n
    k = min(max(int(math.floor((best - lo) / w)), 0), n - 1)
    return max(bound[0], lo + (k - 1) * w), min(bound[1], lo + (k + 2) * w)


def _rank(entry):
    q, alpha, beta = entry[0], entry[1], entry[2]
    return (q, alpha if alpha is not None else 0.0, beta)


def _search(evaluate, a_iv, b_iv, config, pool):
    two = config.model_kind == "two_member"
    n_a, n_b = config.subinterval_counts(a_iv, b_iv)
    if not two and a_iv[1] > a_iv[0]:
        n_a = max(n_a, MIN_REFINE_DIVISIONS)
    if b_iv[1] > b_iv[0]:
        n_b = max(n_b, MIN_REFINE_DIVISIONS)
    a_lo, a_hi = (None, None) if two else a_iv
    b_lo, b_hi = b_iv

    best = None  # (Q, alpha, beta, fit)
    trace = []
    round_best = []
    rounds = 0
    while True:
        rounds += 1
        alphas = [None] if two else _midpoints(a_lo, a_hi, n_a)
        betas = _midpoints(b_lo, b_hi, n_b)
        evaluate.prepare(betas if two else alphas + betas)
        pairs = [(a, b) for a in alphas for b in betas]
        if pool is None:
            scores = [evaluate(a, b) for a, b in pairs]
        else:
            scores = list(pool.map(lambda p: evaluate(*p), pairs))
        for (a, b), s in zip(pairs, scores):
            if s is None:
                trace.append((a, b, math.inf))
                continue
            trace.append((a, b, s[0]))
            cand = (s[0], a, b, s[1])
            if best is None or _rank(cand) < _rank(best):
                best = cand
        if best is None:
            break
        round_best.append((best[1], best[2], best[0]))

        a_done = two or a_hi - a_lo <= config.accuracy
        if (a_done and b_hi - b_lo <= config.accuracy) or rounds >= config.max_rounds:
            break
        if not two:
            a_lo, a_hi = _zoom(a_lo, a_hi, n_a, best[1], a_iv)
        b_lo, b_hi = _zoom(b_lo, b_hi, n_b, best[2], b_iv)
    return best, rounds, trace, round_best


def identify(experimental_output, input, config, memory=None, workers=1):
    """Identify (a2, a1, a0, alpha, beta) from a measured input/output record.

    Runs the interval search from every configured start and returns the
    result with the smallest criterion; ties go to the earliest start.
    ``workers > 1`` scores candidates of a round on a thread pool.
    """
    memory = memory or FULL_MEMORY
    if not isinstance(config, SearchConfig):
        raise InvalidConfig("config must be a SearchConfig")
    two = config.model_kind == "two_member"
    evaluate = _Evaluator(experimental_output, input, memory, two)

    winner = None
    pool = ThreadPoolExecutor(workers) if workers and workers > 1 else None
    try:
        for index, (a_iv, b_iv) in enumerate(config.starts):
            best, rounds, trace, round_best = _search(evaluate, a_iv, b_iv, config, pool)
            if best is None:
                continue
            if winner is None or best[0] < winner.criterion:
                winner = IdentificationResult(
                    model=best[3].model(),
                    criterion=best[0],
                    rounds=rounds,
                    trace=trace,
                    restart_index=index,
                    round_best=round_best,
                )
    finally:
        if pool is not None:
            pool.shutdown()
    if winner is None:
        raise NoFeasibleCandidate(
            "no candidate (alpha, beta) produced a usable fit in any search interval"
        )
    return winner

"""Hot loops of the Grünwald-Letnikov machinery.

Each kernel exists twice: a numba-compiled loop and a pure-numpy version.
The public names (``gl_weights``, ``gl_recursion``) are bound to the numba
path unless ``FRACID_DISABLE_NUMBA`` is set to a truthy value in the
environment before import, or numba cannot be imported. ``causal_convolve``
always uses ``np.convolve``, which beats the compiled loop at every size
measured by ``benchmarks/bench_kernels.py``.

Both paths are always importable under their explicit names so tests and the
benchmark can compare them in one process.
"""

import os

import numpy as np

_FLAG = os.environ.get("FRACID_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path

def gl_weights_numpy(order, count):
    w = np.empty(count + 1)
    w[0] = 1.0
    if count:
        w[1:] = np.cumprod(1.0 - (order + 1.0) / np.arange(1, count + 1))
    return w


def causal_convolve_numpy(weights, x):
    return np.convolve(x, weights)[: x.shape[0]]


def gl_recursion_numpy(weights, denom, u, start):
    n = u.shape[0]
    nw = weights.shape[0]
    y = np.zeros(n)
    for m in range(start, n):
        k = min(m, nw - 1)
        # y[m-1], y[m-2], ..., y[m-k]
        hist = y[m - k:m][::-1]
        y[m] = (u[m] - np.dot(weights[1:k + 1], hist)) / denom
    return y


# ---------------------------------------------------------------- loop path

def _gl_weights_loop(order, count):
    w = np.empty(count + 1)
    w[0] = 1.0
    for j in range(1, count + 1):
        w[j] = w[j - 1] * (1.0 - (order + 1.0) / j)
    return w


def _causal_convolve_loop(weights, x):
    n = x.shape[0]
    nw = weights.shape[0]
    out = np.empty(n)
    for m in range(n):
        k = min(m, nw - 1)
        acc = 0.0
        for j in range(k + 1):
            acc += weights[j] * x[m - j]
        out[m] = acc
    return out


def _gl_recursion_loop(weights, denom, u, start):
    n = u.shape[0]
    nw = weights.shape[0]
    y = np.zeros(n)
    for m in range(start, n):
        k = min(m, nw - 1)
        acc = 0.0
        for j in range(1, k + 1):
            acc += weights[j] * y[m - j]
        y[m] = (u[m] - acc) / denom
    return y


if HAVE_NUMBA:
    # reassoc lets the dot-product loops vectorise; full fastmath would also
    # assume no inf/nan, which unstable candidate fits do produce
    _jit = njit(cache=True, nogil=True, fastmath={"reassoc", "contract"})
    gl_weights_numba = _jit(_gl_weights_loop)
    causal_convolve_numba = _jit(_causal_convolve_loop)
    gl_recursion_numba = _jit(_gl_recursion_loop)
else:  # pragma: no cover
    gl_weights_numba = _gl_weights_loop
    causal_convolve_numba = _causal_convolve_loop
    gl_recursion_numba = _gl_recursion_loop


causal_convolve = causal_convolve_numpy
if USE_NUMBA:
    gl_weights = gl_weights_numba
    gl_recursion = gl_recursion_numba
else:
    gl_weights = gl_weights_numpy
    gl_recursion = gl_recursion_numpy

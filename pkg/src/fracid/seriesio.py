"""Plain-text time-series files and parameter reports.

Series files hold one record per line: ``time input [output]``, separated by
whitespace or semicolons (a line without either may use commas). Decimal
points only. A first line whose leading token is not a number is taken as a
column header; ``#`` starts a comment. A ``# step <h>`` comment, as written
by :func:`write_series`, pins the step exactly when it agrees with the
time column.
"""

import math
import re
import sys

import numpy as np

from .core import SampledSeries
from .errors import NonUniformGrid, ParseError, TooShort

GRID_RTOL = 1e-6
_SPLIT = re.compile(r"[\s;]+")
_STEP_COMMENT = re.compile(r"^#\s*step\s*[=:]?\s*(\S+)\s*$")
_COMMA_DECIMAL = re.compile(r"^[+-]?\d*,\d+$")


def _number(token, path, lineno):
    if "," in token:
        reason = "comma decimal separator (use '.')" if _COMMA_DECIMAL.match(token) else "stray comma"
        raise ParseError(path, lineno, token, reason)
    try:
        value = float(token)
    except ValueError:
        raise ParseError(path, lineno, token) from None
    if not math.isfinite(value) or "_" in token:
        raise ParseError(path, lineno, token)
    return value


def _tokens(line):
    toks = [t for t in _SPLIT.split(line.strip()) if t]
    if len(toks) == 1 and "," in toks[0] and not _COMMA_DECIMAL.match(toks[0]):
        toks = [t.strip() for t in toks[0].split(",")]
    return toks


def _is_number(token):
    try:
        float(token.replace(",", "."))
    except ValueError:
        return False
    return True


def read_table(path):
    """Parse a series file into ``(step, columns)``.

    ``columns`` is a list of arrays, time excluded. The time column must be
    strictly increasing and uniform to ``GRID_RTOL`` of the mean spacing.
    """
    path = str(path)
    rows = []
    pinned_step = None
    width = None
    seen_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _STEP_COMMENT.match(line)
                if m:
                    pinned_step = _number(m.group(1), path, lineno)
                continue
            toks = _tokens(line)
            if not seen_data and not _is_number(toks[0]):
                seen_data = True  # header line
                continue
            seen_data = True
            if width is None:
                width = len(toks)
                if width not in (2, 3):
                    raise ParseError(path, lineno, line, "expected 2 or 3 columns (time input [output])")
            elif len(toks) != width:
                raise ParseError(path, lineno, line, f"expected {width} columns, got {len(toks)}")
            rows.append([_number(t, path, lineno) for t in toks])

    if len(rows) < 3:
        raise TooShort(f"{path}: need at least 3 records, got {len(rows)}")
    data = np.array(rows)
    t = data[:, 0]
    dt = np.diff(t)
    if np.any(dt <= 0):
        i = int(np.argmax(dt <= 0))
        raise NonUniformGrid(f"{path}: time not strictly increasing at record {i + 2} (t={t[i + 1]!r})")
    mean = (t[-1] - t[0]) / (len(t) - 1)
    dev = np.max(np.abs(dt - mean)) / mean
    if dev > GRID_RTOL:
        raise NonUniformGrid(
            f"{path}: time spacing deviates by {dev:.3g} of the mean step {mean:.6g} "
            f"(limit {GRID_RTOL:g})"
        )
    step = float(mean)
    if pinned_step is not None and abs(pinned_step - mean) <= GRID_RTOL * mean:
        step = pinned_step
    return step, [data[:, k] for k in range(1, data.shape[1])]


def load_series(path):
    """Load ``(input, output)``; ``output`` is None for a two-column file."""
    step, cols = read_table(path)
    inp = SampledSeries(step, cols[0])
    out = SampledSeries(step, cols[1]) if len(cols) > 1 else None
    return inp, out


def format_series(step, *columns, names=None):
    n = len(columns[0])
    lines = [f"# step {float(step)!r}"]
    if names:
        lines.append(" ".join(names))
    for m in range(n):
        lines.append(" ".join(repr(float(v)) for v in (m * step,) + tuple(c[m] for c in columns)))
    return "\n".join(lines) + "\n"


def write_series(path, step, *columns, names=None):
    """Write ``time col1 [col2 ...]`` with full float precision."""
    text = format_series(step, *(np.asarray(c, dtype=float) for c in columns), names=names)
    _write_text(path, text)


def _write_text(path, text):
    if str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _g(value):
    return f"{value:.6g}"


def model_lines(model):
    lines = []
    if not model.is_two_member:
        lines.append(f"a2: {_g(model.a2)}")
    lines.append(f"a1: {_g(model.a1)}")
    lines.append(f"a0: {_g(model.a0)}")
    if not model.is_two_member:
        lines.append(f"alpha: {_g(model.alpha)}")
    lines.append(f"beta: {_g(model.beta)}")
    return lines


def format_identification_report(result):
    lines = model_lines(result.model)
    lines += [f"Q: {_g(result.criterion)}",
              f"rounds: {result.rounds}",
              f"restart_index: {result.restart_index}",
              f"evaluations: {len(result.trace)}"]
    for k, (a, b, q) in enumerate(result.round_best, start=1):
        head = f"trace {k}:"
        if a is not None:
            head += f" alpha={_g(a)}"
        lines.append(f"{head} beta={_g(b)} Q={_g(q)}")
    return "\n".join(lines) + "\n"


def format_fit_report(fit, criterion=None):
    lines = model_lines(fit.model())
    lines.append(f"residual: {_g(fit.residual_norm)}")
    if criterion is not None:
        lines.append(f"Q: {_g(criterion)}")
    return "\n".join(lines) + "\n"


def write_report(path, text):
    _write_text(path, text)

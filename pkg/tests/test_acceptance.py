"""Exit criteria for the package, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` or directly as a script.
"""

import sys
import time
from pathlib import Path

import mpmath
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fracid import (  # noqa: E402
    ModelParameters,
    SampledSeries,
    SearchConfig,
    approximation_criterion,
    balance_residual,
    fit_linear_coefficients,
    gl_weights,
    identify,
    simulate,
)
from conftest import FRACTIONAL_MODEL, HORIZON, INTEGER_MODEL, STEP, integer_analytic  # noqa: E402

ALPHA_IV = (1.5, 2.55)
BETA_IV = (0.7, 1.33)
SEARCH = SearchConfig(ALPHA_IV, BETA_IV, epsilon=0.05, accuracy=1e-4)
REL_TOL = 1e-2


def _params(m):
    return np.array([m.a2, m.a1, m.a0, m.alpha, m.beta])


def _step_data(model, step=STEP, horizon=HORIZON):
    u = SampledSeries.unit_step(step, horizon)
    return u, simulate(model, u)


_cache = {}


def _free_search(model):
    key = id(model)
    if key not in _cache:
        u, y = _step_data(model)
        t0 = time.perf_counter()
        res = identify(y, u, SEARCH)
        _cache[key] = (res, time.perf_counter() - t0)
    return _cache[key]


def _recovery(model):
    res, elapsed = _free_search(model)
    rel = np.abs(_params(res.model) - _params(model)) / np.abs(_params(model))
    ok = bool(np.all(rel <= REL_TOL)) and elapsed <= 60.0
    got = ", ".join(f"{v:.6g}" for v in _params(res.model))
    return ok, f"got ({got}), max rel err {rel.max():.2e} (tol {REL_TOL:g}), {elapsed:.1f} s (limit 60 s)"


def criterion_1():
    return _recovery(INTEGER_MODEL)


def criterion_2():
    return _recovery(FRACTIONAL_MODEL)


def criterion_3():
    u, y = _step_data(FRACTIONAL_MODEL)
    res = identify(y, u, SearchConfig((2.2, 2.2), (0.9, 0.9)))
    got = np.array([res.model.a2, res.model.a1, res.model.a0])
    rel = np.abs(got - [0.8, 0.5, 1.0]) / [0.8, 0.5, 1.0]
    return bool(np.all(rel <= 1e-6)), f"max rel err {rel.max():.2e} (tol 1e-6), rounds {res.rounds}"


def criterion_4():
    u, y = _step_data(FRACTIONAL_MODEL)
    fit = fit_linear_coefficients(y, u, 2.0, 1.0)
    q_forced = approximation_criterion(y, simulate(fit.model(), u))
    q_free = _free_search(FRACTIONAL_MODEL)[0].criterion
    ref = np.array([0.76639, 0.23184, 1.0])
    got = np.array([fit.a2, fit.a1, fit.a0])
    rel = np.abs(got - ref) / ref
    ok = q_forced > q_free and bool(np.all(rel <= 0.10))
    return ok, (f"Q forced {q_forced:.3g} > Q free {q_free:.3g}: {q_forced > q_free}; "
                f"coefficients ({got[0]:.5g}, {got[1]:.5g}, {got[2]:.5g}) max rel dev {rel.max():.3f} (tol 0.10)")


def criterion_5():
    errs = []
    for h in (0.05, 0.025):
        u, y = _step_data(INTEGER_MODEL, step=h)
        errs.append(np.max(np.abs(y.values - integer_analytic(y.times))))
    ratio = errs[0] / errs[1]
    return 1.7 <= ratio <= 2.3, f"errors {errs[0]:.3e}, {errs[1]:.3e}, ratio {ratio:.3f} (want [1.7, 2.3])"


def criterion_6():
    rng = np.random.default_rng(20240601)
    worst_bal = worst_fit = 0.0
    for _ in range(20):
        beta = rng.uniform(0.3, 1.3)
        alpha = rng.uniform(beta + 0.2, 2.6)
        a2, a1, a0 = rng.uniform(0.1, 5.0, 3)
        model = ModelParameters(a2, a1, a0, alpha, beta)
        u = SampledSeries(STEP, rng.uniform(-1.0, 1.0, 401))
        y = simulate(model, u)
        res, scale = balance_residual(model, y, u)
        worst_bal = max(worst_bal, float(np.max(np.abs(res[2:]) / scale[2:])))
        fit = fit_linear_coefficients(y, u, alpha, beta)
        rel = np.abs(np.array([fit.a2, fit.a1, fit.a0]) - [a2, a1, a0]) / [a2, a1, a0]
        worst_fit = max(worst_fit, float(rel.max()))
    ok = worst_bal <= 1e-9 and worst_fit <= 1e-6
    return ok, f"worst balance residual {worst_bal:.2e} (tol 1e-9), worst round-trip {worst_fit:.2e} (tol 1e-6)"


def criterion_7():
    worst = 0.0
    with mpmath.workdps(50):
        for order in (0.3, 0.5, 0.9, 1.0, 2.0, 2.2):
            w = gl_weights(order, 50).weights
            for j in range(51):
                ref = float((-1) ** j * mpmath.binomial(mpmath.mpf(order), j))
                err = abs(w[j] - ref) / abs(ref) if ref != 0 else abs(w[j])
                worst = max(worst, err)
    return worst <= 1e-10, f"worst rel err {worst:.2e} over j <= 50, six orders (tol 1e-10)"


def criterion_two_member():
    truth = np.array([800.0, 1.4, 0.75])
    u, y = _step_data(ModelParameters.two_member(*truth), step=1.0, horizon=1000.0)
    res = identify(y, u, SearchConfig(None, (0.33, 1.3), model_kind="two_member"))
    got = np.array([res.model.a1, res.model.a0, res.model.beta])
    rel = np.abs(got - truth) / truth
    ok = bool(np.all(rel <= REL_TOL)) and res.model.is_two_member
    return ok, f"got (a1, a0, beta) = ({got[0]:.6g}, {got[1]:.6g}, {got[2]:.6g}), max rel err {rel.max():.2e}"


CRITERIA = [
    ("1", "integer-system recovery", criterion_1),
    ("2", "fractional-system recovery", criterion_2),
    ("3", "point-interval exactness", criterion_3),
    ("4", "forced integer-order fit", criterion_4),
    ("5", "convergence order", criterion_5),
    ("6", "discrete balance and round trip", criterion_6),
    ("7", "weight oracle", criterion_7),
    ("2m", "two-member synthetic analogue", criterion_two_member),
]


def _line(tag, name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {tag} {name}: {detail}"


@pytest.mark.parametrize("tag, name, check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(tag, name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(tag, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for tag, name, check in CRITERIA:
        ok, detail = check()
        failures += not ok
        print(_line(tag, name, ok, detail))
    sys.exit(1 if failures else 0)

"""Time the numba and numpy kernel paths side by side.

    python benchmarks/bench_kernels.py [--sizes 400 1600 6400] [--repeat 5]

Also times one full identification of the fractional test system with
whichever backend FRACID_DISABLE_NUMBA selects.
"""

import argparse
import time

import numpy as np

from fracid import ModelParameters, SampledSeries, SearchConfig, identify, kernels, simulate


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[400, 1600, 6400])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-identify", action="store_true")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    # warm up the jit cache so compile time is not measured
    kernels.gl_recursion_numba(np.ones(3), 2.0, np.ones(4), 2)
    kernels.causal_convolve_numba(np.ones(3), np.ones(4))

    print(f"{'kernel':<12}{'n':>7}{'numba [ms]':>13}{'numpy [ms]':>13}{'speedup':>10}")
    for n in args.sizes:
        w = kernels.gl_weights_numpy(1.3, n - 1)
        u = rng.uniform(-1, 1, n)
        rows = [
            ("convolve", lambda: kernels.causal_convolve_numba(w, u),
             lambda: kernels.causal_convolve_numpy(w, u)),
            ("recursion", lambda: kernels.gl_recursion_numba(w, 5.0, u, 2),
             lambda: kernels.gl_recursion_numpy(w, 5.0, u, 2)),
        ]
        for name, fast, slow in rows:
            a = best_of(fast, args.repeat) * 1e3
            b = best_of(slow, args.repeat) * 1e3
            print(f"{name:<12}{n:>7}{a:>13.3f}{b:>13.3f}{b / a:>10.1f}")

    if not args.skip_identify:
        model = ModelParameters(0.8, 0.5, 1.0, 2.2, 0.9)
        step = SampledSeries.unit_step(0.05, 20.0)
        y = simulate(model, step)
        cfg = SearchConfig((1.5, 2.55), (0.7, 1.33), epsilon=0.05, accuracy=1e-4)
        t0 = time.perf_counter()
        res = identify(y, step, cfg)
        print(f"identify ({kernels.BACKEND}): {time.perf_counter() - t0:.2f} s, "
              f"{len(res.trace)} candidates, {res.rounds} rounds")


if __name__ == "__main__":
    main()

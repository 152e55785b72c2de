"""Compare the two kernel backends on the hot paths and end to end.

Usage: python3 benchmarks/bench_kernels.py [--size N] [--repeats R]

Times the stable transforms and the box-maximum scan on identical input
arrays under the pure-numpy implementations and the compiled ones, then an
end-to-end power cell with each backend swapped in.  The compiled backend is
warmed up first so compilation time is not counted.
"""

import argparse
import time

import numpy as np

from smt import kernels
from smt.memory_test import TestConfig
from smt.power_harness import empirical_power
from smt.fields import make_field_spec


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(size, repeats):
    rng = np.random.default_rng(0)
    u = rng.random(size)
    w = rng.standard_exponential(size)
    x = np.asarray(kernels.NUMPY_IMPLS["sas_values"](u, w, 1.2))
    strided = x.reshape(-1)[:: 3]

    cases = [
        ("sas_values(alpha=1.2)", lambda impls: impls["sas_values"](u, w, 1.2)),
        ("sas_values(alpha=1.0)", lambda impls: impls["sas_values"](u, w, 1.0)),
        ("positive_stable(0.35)", lambda impls: impls["positive_stable_values"](u, w, 0.35)),
        ("abs_max contiguous", lambda impls: impls["abs_max"](x)),
        ("abs_max strided", lambda impls: impls["abs_max"](strided)),
    ]
    rows = []
    for name, call in cases:
        t_np = best_of(lambda: call(kernels.NUMPY_IMPLS), repeats)
        if kernels.NUMBA_IMPLS is None:
            rows.append((name, t_np, None))
            continue
        call(kernels.NUMBA_IMPLS)  # warmup/compile
        t_nb = best_of(lambda: call(kernels.NUMBA_IMPLS), repeats)
        rows.append((name, t_np, t_nb))
    return rows


def bench_end_to_end(repeats):
    """One small power cell per backend; module attributes are swapped so all
    call sites pick up the chosen implementations."""
    field = make_field_spec("iid", 1.2)
    config = TestConfig(alpha=1.2, dim=2, n=60, rho=0.65, beta=0.1)

    def run_cell():
        empirical_power(field, config, 40, seed=0, threads=1)

    saved = (kernels.sas_values, kernels.positive_stable_values, kernels.abs_max)
    rows = []
    try:
        for label, impls in (("numpy", kernels.NUMPY_IMPLS), ("numba", kernels.NUMBA_IMPLS)):
            if impls is None:
                rows.append((f"power cell, {label}", None))
                continue
            kernels.sas_values = impls["sas_values"]
            kernels.positive_stable_values = impls["positive_stable_values"]
            kernels.abs_max = impls["abs_max"]
            run_cell()  # warmup
            rows.append((f"power cell, {label}", best_of(run_cell, repeats)))
    finally:
        kernels.sas_values, kernels.positive_stable_values, kernels.abs_max = saved
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=1_000_000, help="array length")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats, best kept")
    args = parser.parse_args()

    print(f"active backend: {kernels.BACKEND}"
          + ("" if kernels.NUMBA_IMPLS else " (compiled backend unavailable)"))
    print(f"array size {args.size}, best of {args.repeats}\n")

    print(f"{'kernel':<26} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, t_np, t_nb in bench_kernels(args.size, args.repeats):
        nb = f"{t_nb * 1e3:9.2f}ms" if t_nb is not None else "       n/a"
        speed = f"{t_np / t_nb:7.2f}x" if t_nb else "     n/a"
        print(f"{name:<26} {t_np * 1e3:9.2f}ms {nb} {speed}")

    print()
    for name, t in bench_end_to_end(args.repeats):
        shown = f"{t * 1e3:9.2f}ms" if t is not None else "n/a"
        print(f"{name:<26} {shown}")


if __name__ == "__main__":
    main()

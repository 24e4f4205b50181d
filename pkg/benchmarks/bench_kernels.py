"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--sizes 3 8 16 32] [--repeat 200]

Prints the best-of-``repeat`` time per call for each raw kernel and
size (no size-based dispatch), plus the end-to-end time of the
example-pair order check with each backend forced.  Exits 1 if the
compiled extension is not built.
"""

import argparse
import importlib
import sys
import timeit

import numpy as np

from coreep import _kernels_py, kernels


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _cplx(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def kernel_rows(compiled, sizes, repeat):
    rows = []
    for n in sizes:
        a, b, c = (_cplx(n, i) for i in range(3))
        c = a @ b + 1e-3 * c
        unit = a / np.abs(a).max()
        cases = {
            "frob": (lambda m: m.frob(a)),
            "frob_diff": (lambda m: m.frob_diff(a, b)),
            "frob_prod_diff": (lambda m: m.frob_prod_diff(a, b, c)),
            "scaled_power(p=4)": (lambda m: m.scaled_power(unit, 4)),
        }
        for name, call in cases.items():
            tc = _best(lambda: call(compiled), repeat)
            tp = _best(lambda: call(_kernels_py), repeat)
            rows.append((name, n, tc, tp))
    return rows


def order_check_times(repeat):
    """Example-pair order check with each backend swapped into ``coreep.kernels``."""
    from coreep import orders
    from coreep.numkernel import ToleranceContext, approx_eq

    a = np.array([[1, 2, 3], [0, 0, 0], [0, 0, 0]], dtype=complex)
    b = np.array([[1, 2, 3], [0, 0, 1], [0, 0, 0]], dtype=complex)
    tol = ToleranceContext(rtol=1e-12)

    def check():
        orders.le_core_ep(a, b, tol)
        orders.le_core_ep(b, a, tol)
        approx_eq(a, b, tol)
        orders.le_drazin(a, b, tol)

    out = {}
    saved = {k: getattr(kernels, k) for k in ("frob", "frob_diff", "frob_prod_diff", "_power")}
    try:
        out["cython"] = _best(check, repeat)
        kernels.frob = _kernels_py.frob
        kernels.frob_diff = _kernels_py.frob_diff
        kernels.frob_prod_diff = _kernels_py.frob_prod_diff
        kernels._power = _kernels_py.scaled_power
        out["python"] = _best(check, repeat)
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[3, 8, 16, 32])
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args(argv)
    try:
        compiled = importlib.import_module("coreep._kernels")
    except ImportError:
        print("compiled extension coreep._kernels is not built; nothing to compare", file=sys.stderr)
        return 1

    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<20}{'n':>4}{'cython (us)':>14}{'python (us)':>14}{'speed-up':>10}")
    for name, n, tc, tp in kernel_rows(compiled, args.sizes, args.repeat):
        print(f"{name:<20}{n:>4}{tc * 1e6:>14.2f}{tp * 1e6:>14.2f}{tp / tc:>10.2f}")
    t = order_check_times(args.repeat)
    print(
        f"example-pair order check: cython {t['cython'] * 1e3:.3f} ms, "
        f"python {t['python'] * 1e3:.3f} ms"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

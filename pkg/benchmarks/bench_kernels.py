"""Compare the numba and pure-numpy backends of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 400]

Each kernel runs once per backend to warm up (numba compiles on first call),
then the best of ``--repeat`` timings is reported.  Outputs of the two
backends are compared before timing.
"""

import argparse
import os
import time

import numpy as np

from moufang_lab import _kernels
from moufang_lab.groups import heisenberg, modular_group
from moufang_lab.triality import group_doubling, moufang_from_triality


def _with_backend(name, fn, *args):
    os.environ["MOUFANG_LAB_NUMBA"] = "1" if name == "numba" else "0"
    try:
        return fn(*args)
    finally:
        os.environ.pop("MOUFANG_LAB_NUMBA", None)


def best_of(name, fn, make_args, repeat):
    _with_backend(name, fn, *make_args())
    times = []
    for _ in range(repeat):
        args = make_args()
        t0 = time.perf_counter()
        _with_backend(name, fn, *args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=400, help="rref matrix size")
    args = ap.parse_args()
    if not _kernels.numba_available():
        print("numba is not installed; only the numpy backend can run")
        return

    rng = np.random.default_rng(0)
    p = 5
    mat = rng.integers(0, p, (args.size, args.size + 50))
    H = heisenberg(p)
    table = np.ascontiguousarray(H.table)
    u = rng.integers(0, p, H.order)
    v = rng.integers(0, p, H.order)
    loop = moufang_from_triality(group_doubling(modular_group(p)))
    ltable = np.ascontiguousarray(loop.table)

    cases = [
        ("rref %dx%d mod %d" % (mat.shape[0], mat.shape[1], p), _kernels.rref_inplace, lambda: (mat.copy(), p)),
        ("F_5[Heis(5)] product", _kernels.group_algebra_mul, lambda: (u, v, table, p)),
        ("Moufang sweep, order-%d loop" % loop.order, _kernels.moufang_first_violation, lambda: (ltable,)),
    ]
    print(f"{'kernel':<34} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for label, fn, make in cases:
        a = _with_backend("numpy", fn, *make())
        b = _with_backend("numba", fn, *make())
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        if not same:
            raise SystemExit(f"{label}: backends disagree")
        t_np = best_of("numpy", fn, make, args.repeat)
        t_nb = best_of("numba", fn, make, args.repeat)
        print(f"{label:<34} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()

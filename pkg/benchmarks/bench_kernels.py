"""Time the compiled and numpy kernel backends on representative workloads.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Also times one
full transfer-equation check, which exercises the active backend end to end.
"""

import argparse
import time

import numpy as np

from ellthom import kernels
from ellthom.lattice import Lattice


def _workloads(L: Lattice):
    q = L.q
    rng = np.random.default_rng(0)
    zs = (rng.uniform(-1, 1, 2000) + 1j * rng.uniform(-1, 1, 2000)).astype(complex)
    a = rng.normal(size=9) + 1j * rng.normal(size=9)
    b = rng.normal(size=9) + 1j * rng.normal(size=9)
    b[0] += 3
    size = 15
    ii, jj = np.meshgrid(np.arange(5), np.arange(5), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    keep = ii + jj < 5
    ii, jj = ii[keep].astype(np.intp), jj[keep].astype(np.intp)
    kk = (ii + jj).astype(np.intp)
    v = rng.normal(size=size) + 0j
    return {
        "sigma_values[2000]": lambda m: m.sigma_values(zs, q, 60),
        "ochanine_values[2000]": lambda m: m.ochanine_values(zs, q, 60),
        "sigma_taylor[order 8]": lambda m: m.sigma_taylor(0.3 + 0.2j, q, 60, 8),
        "ochanine_taylor[order 8]": lambda m: m.ochanine_taylor(0.3 + 0.2j, q, 60, 8),
        "jet_mul[9]": lambda m: m.jet_mul(a, b),
        "jet_div[9]": lambda m: m.jet_div(a, b),
        "sparse_mul[15]": lambda m: m.sparse_mul(v, v, ii, jj, kk, size),
    }


def _time(fn, repeat: int) -> float:
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args(argv)
    L = Lattice(0.3 + 0.9j, "witten")
    backends = kernels.available_backends()
    names = sorted(backends)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':28s}" + "".join(f"{n:>14s}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in _workloads(L).items():
        times = {n: _time(lambda: fn(backends[n]), args.repeat) for n in names}
        row = f"{label:28s}" + "".join(f"{times[n] * 1e6:12.1f}us" for n in names)
        if len(names) > 1:
            row += f"   {times['python'] / times['cython']:7.1f}x"
        print(row)

    from ellthom.fixtures import load_shipped
    from ellthom.theta import ThetaFunction
    from ellthom.thomfix import verify_model

    th = ThetaFunction.sigma(L)
    t = time.perf_counter()
    verify_model(load_shipped("point_z3_9z"), th)
    print(f"verify_model(point_z3_9z) with {kernels.BACKEND}: {time.perf_counter() - t:.3f}s")


if __name__ == "__main__":
    main()

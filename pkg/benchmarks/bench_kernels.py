"""Compare the numba and numpy elimination kernels.

Kernel timings run in-process against both implementations; the end-to-end
timing resolves k over A in a subprocess per backend (the backend is chosen
at import time from GORHOM_BACKEND).

    python3 benchmarks/bench_kernels.py [--sizes 100,200,400] [--steps 5]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from gorhom import kernels

P = 32003


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_rref(n, rng):
    a = rng.integers(0, P, size=(n, n + n // 2), dtype=np.int64)
    out = {}
    if kernels.rref_numba is not None:
        kernels.rref_numba(a[:4, :4].copy(), np.int64(P), np.int64(kernels.lazy_budget(P)))  # compile
        out["numba"] = _time(lambda: kernels.rref_numba(a.copy(), np.int64(P), np.int64(kernels.lazy_budget(P))))
    out["numpy"] = _time(lambda: kernels.rref_numpy(a.copy(), P), repeat=1)
    # both must agree
    if kernels.rref_numba is not None:
        x, y = a.copy(), a.copy()
        r1, _ = kernels.rref_numba(x, np.int64(P), np.int64(kernels.lazy_budget(P)))
        r2, _ = kernels.rref_numpy(y, P)
        assert int(r1) == int(r2) and np.array_equal(x[:r1] % P, y[:r2]), "backends disagree"
    return out


E2E = ("import time\nfrom gorhom.document import bundled\nfrom gorhom.scalar import GF\n"
       "from gorhom.resolve import betti_numbers\n"
       "k = bundled('A.json', field=GF(32003), alpha=2).module('k')\n"
       "t = time.perf_counter(); b = betti_numbers(k, {steps})\n"
       "print(time.perf_counter() - t, b[-1])\n")


def bench_end_to_end(steps):
    out = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, GORHOM_BACKEND=backend)
        r = subprocess.run([sys.executable, "-c", E2E.format(steps=steps)], env=env,
                           capture_output=True, text=True, check=True)
        secs, last = r.stdout.split()
        out[backend] = (float(secs), int(last))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="100,200,400")
    ap.add_argument("--steps", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        r = bench_rref(n, rng)
        nb = r.get("numba", float("nan"))
        print(f"{n:>6} {nb:>10.4f} {r['numpy']:>10.4f} {r['numpy'] / nb:>8.1f}")
    e = bench_end_to_end(args.steps)
    print(f"resolution of k over A to step {args.steps} (F_{P}):")
    for k, (secs, last) in e.items():
        print(f"  {k:6s} {secs:8.2f} s  b_{args.steps} = {last}")
    if e["numba"][1] != e["numpy"][1]:
        print("backends disagree")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

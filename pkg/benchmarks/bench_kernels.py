"""Time each hot kernel on its numba and numpy paths.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Compilation happens in a warm-up call that is not timed.  Results are
checked for agreement before timing.
"""

import argparse
import math
import time

import numpy as np

from rmtlab import _kernels as K
from rmtlab.rng import RngState, normals


def _best(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(quick):
    gen = RngState(2024).generator()
    n = 120 if quick else 400
    a = normals(gen, (n, n))
    a = 0.5 * (a + a.T)
    d, e = K.householder_tridiagonal_jit(a)
    pad = np.zeros(n)
    pad[: n - 1] = e[: n - 1]
    lu_in = normals(gen, (n, n))
    nd = 30 if quick else 100
    lam = np.linspace(-2.0, 2.0, nd)
    xi = normals(gen, (200 if quick else 2000, nd))
    grid = np.floor(-np.log(1.0 - gen.random((300, 300))) / math.log(2.0)).astype(np.int64)
    wn, wk = (5, 6) if quick else (7, 7)
    return [
        ("householder n=%d" % n, lambda f: f(a), K.householder_tridiagonal_jit, K.householder_tridiagonal_numpy),
        ("tql n=%d" % n, lambda f: f(d, pad, 30 * n)[0], K.tql_jit, K.tql_numpy),
        ("lu n=%d" % n, lambda f: f(lu_in)[0], K.lu_jit, K.lu_numpy),
        ("dyson n=%d steps=%d" % (nd, xi.shape[0]), lambda f: f(lam, xi, 1e-4, 0.0, 1e9, 2.0, 1.0, 20)[0],
         K.dyson_block_jit, K.dyson_block_numpy),
        ("lpp 300x300", lambda f: f(grid), K.lpp_jit, K.lpp_numpy),
        ("words n=%d k=%d" % (wn, wk), lambda f: f(wn, wk)[1].sum(), K.word_signatures_jit, K.word_signatures_numpy),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="small sizes for a smoke run")
    args = ap.parse_args()
    print(f"{'kernel':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, call, jit, ref in _cases(args.quick):
        out_jit = np.asarray(call(jit))
        out_ref = np.asarray(call(ref))
        if np.issubdtype(out_jit.dtype, np.floating):
            ok = np.allclose(np.sort(out_jit.ravel()), np.sort(out_ref.ravel()), rtol=1e-8, atol=1e-8)
        else:
            ok = np.array_equal(out_jit, out_ref)
        if not ok:
            raise SystemExit(f"{name}: backends disagree")
        t_jit = _best(lambda: call(jit), args.repeat)
        t_ref = _best(lambda: call(ref), args.repeat)
        print(f"{name:<28}{t_jit:>12.5f}{t_ref:>12.5f}{t_ref / t_jit:>10.1f}")


if __name__ == "__main__":
    main()

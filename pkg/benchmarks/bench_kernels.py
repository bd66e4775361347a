"""Compare the compiled and pure-Python kernel backends.

Times each kernel on 5-point Laplacians, then one end-to-end solve per
backend in a fresh interpreter (the backend is fixed at import time)::

    python benchmarks/bench_kernels.py --sizes 16 32 --solve-m 32
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from indefsplit._backend import COMPILED, get_kernels
from indefsplit.core_la import kron_sum, permute_symmetric, tridiag

SOLVE_SNIPPET = """
import time
from indefsplit._backend import COMPILED
from indefsplit.krylov import KrylovConfig, gmres_solve
from indefsplit.model_problems import example1
from indefsplit.splittings import SplittingScheme, build_operators
p = example1({m}, 1.0)
t0 = time.perf_counter()
ops = build_operators(p, SplittingScheme("I"))
_, rep = gmres_solve(p, ops, KrylovConfig("fgmres"))
print(COMPILED, rep.iters, time.perf_counter() - t0)
"""


def best_of(fn, repeat):
    t = timeit.Timer(fn)
    number, _ = t.autorange()
    return min(t.repeat(repeat=repeat, number=number)) / number


def kernel_cases(k, m):
    K = kron_sum(tridiag(m, -1, 2, -1), m)
    n = K.n_rows
    perm = np.asarray(k.amd(K.row_ptr, K.col_idx, n), dtype=np.intp)
    B = permute_symmetric(K, perm)
    parent = np.asarray(k.etree(B.row_ptr, B.col_idx))
    Lp = np.asarray(k.chol_colptr(B.row_ptr, B.col_idx, parent))
    Li, Lx, _ = k.chol_numeric(B.row_ptr, B.col_idx, B.values, parent, Lp)
    x = np.random.default_rng(0).standard_normal(n)

    def triangular():
        y = x.copy()
        k.lsolve(Lp, Li, Lx, y)
        k.ltsolve(Lp, Li, Lx, y)

    return {
        "csr_matvec": lambda: k.csr_matvec(K.row_ptr, K.col_idx, K.values, x),
        "amd": lambda: k.amd(K.row_ptr, K.col_idx, n),
        "etree+colptr": lambda: k.chol_colptr(B.row_ptr, B.col_idx, k.etree(B.row_ptr, B.col_idx)),
        "chol_numeric": lambda: k.chol_numeric(B.row_ptr, B.col_idx, B.values, parent, Lp),
        "lsolve+ltsolve": triangular,
    }


def run_solve(m, pure):
    env = dict(os.environ)
    if pure:
        env["INDEFSPLIT_PURE"] = "1"
    else:
        env.pop("INDEFSPLIT_PURE", None)
    out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(m=m)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0] == "True", int(out[1]), float(out[2])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--solve-m", type=int, default=32, help="grid size of the end-to-end solve; 0 skips it")
    a = ap.parse_args(argv)
    if not COMPILED:
        sys.exit("compiled kernels are not built; run 'pip install -e . --no-build-isolation'")
    py, cy = get_kernels("python"), get_kernels("cython")

    print(f"{'kernel':<16}{'n':>7}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for m in a.sizes:
        cases_py, cases_cy = kernel_cases(py, m), kernel_cases(cy, m)
        for name in cases_py:
            tp = best_of(cases_py[name], a.repeat)
            tc = best_of(cases_cy[name], a.repeat)
            print(f"{name:<16}{m * m:>7}{1e3 * tp:>14.3f}{1e3 * tc:>14.3f}{tp / tc:>10.1f}")

    if a.solve_m:
        print(f"\nFGMRES-Method I, Example 1, n={a.solve_m ** 2}")
        for pure in (True, False):
            compiled, iters, secs = run_solve(a.solve_m, pure)
            label = "cython" if compiled else "python"
            print(f"  {label:<7} {iters} outer iterations, {secs:.2f} s")


if __name__ == "__main__":
    main()

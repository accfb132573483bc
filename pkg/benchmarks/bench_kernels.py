"""Compare the compiled and pure-Python rank kernels on boundary matrices.

    python benchmarks/bench_kernels.py [--sizes 20 30 40] [--repeat 3]

Matrices are boundary maps of Linial-Meshulam samples at p = 3/n and
p = 8/n.  Prints one row per (n, p, field) with the best time of each backend
and the speedup; ranks are checked for agreement on every row.
"""

import argparse
import timeit

from lmcomplex import linalg
from lmcomplex.invariants import boundary_rows
from lmcomplex.stochastic import sample_lm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 30, 40, 50])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if linalg.BACKEND != "cython":
        raise SystemExit("compiled kernels not available; build with 'pip install -e .'")

    print(f"{'n':>4} {'p':>7} {'faces':>6} {'field':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        for c in (3.0, 8.0):
            S = sample_lm(n, min(1.0, c / n), seed=n).complex
            rows, ncols = boundary_rows(S)
            for field in (linalg.RATIONALS, linalg.GF2):
                ranks = {b: linalg.rank(rows, ncols, field, b) for b in ("python", "cython")}
                assert ranks["python"] == ranks["cython"], ranks
                t = {b: min(timeit.repeat(lambda b=b: linalg.rank(rows, ncols, field, b),
                                          number=1, repeat=args.repeat))
                     for b in ("python", "cython")}
                print(f"{n:>4} {c / n:>7.4f} {S.f:>6} {field:>10} {t['python']:>10.4f} "
                      f"{t['cython']:>10.4f} {t['python'] / t['cython']:>7.1f}x")


if __name__ == "__main__":
    main()

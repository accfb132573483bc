"""Rank kernels with a compiled backend and a pure-Python fallback.

The compiled extension is used when it imports and ``LMCOMPLEX_PURE_PYTHON``
is unset; otherwise the pure-Python kernels are used.  Both give identical
exact results.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("LMCOMPLEX_PURE_PYTHON"):
        raise ImportError("pure-Python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

RATIONALS = "rationals"
GF2 = "gf2"


def rank(rows, ncols, field=RATIONALS, backend=None):
    """Rank of a sparse matrix.

    ``rows`` holds ``(column, coefficient)`` pairs.  Over GF(2) the
    coefficients are reduced mod 2.
    """
    backend = backend or BACKEND
    if backend not in ("cython", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "cython" and _compiled is None:
        raise RuntimeError("compiled kernels are not available")
    if field == GF2:
        bit_rows = [[j for j, c in row if c % 2] for row in rows]
        if backend == "cython":
            return _compiled.rank_gf2(bit_rows, ncols)
        return _kernels_py.rank_gf2(bit_rows, ncols)
    if field != RATIONALS:
        raise ValueError(f"unknown field {field!r}")
    if backend == "cython":
        try:
            return _compiled.rank_int(rows, ncols)
        except OverflowError:
            pass
    return _kernels_py.rank_int(rows, ncols)

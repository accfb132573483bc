# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rank kernels over GF(2) and the rationals."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport llabs

cnp.import_array()

cdef int64_t LIMIT = 1 << 30


def rank_gf2(rows, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t words = (ncols + 63) // 64
    if m == 0 or ncols == 0:
        return 0
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] arr = np.zeros((m, words), dtype=np.uint64)
    cdef uint64_t[:, ::1] A = arr
    cdef Py_ssize_t i, j, r, w, col, piv, rank = 0
    cdef uint64_t bit, tmp
    for i, row in enumerate(rows):
        for j in row:
            A[i, j >> 6] ^= (<uint64_t>1) << (j & 63)
    for col in range(ncols):
        if rank == m:
            break
        w = col >> 6
        bit = (<uint64_t>1) << (col & 63)
        piv = -1
        for r in range(rank, m):
            if A[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(w, words):
                tmp = A[piv, j]
                A[piv, j] = A[rank, j]
                A[rank, j] = tmp
        for r in range(rank + 1, m):
            if A[r, w] & bit:
                for j in range(w, words):
                    A[r, j] ^= A[rank, j]
        rank += 1
    return rank


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    a = llabs(a)
    b = llabs(b)
    while b:
        a, b = b, a % b
    return a


def rank_int(rows, Py_ssize_t ncols):
    """Exact rank over the rationals; raises OverflowError when int64 is not enough."""
    cdef Py_ssize_t m = len(rows)
    if m == 0 or ncols == 0:
        return 0
    cdef cnp.ndarray[cnp.int64_t, ndim=2] arr = np.zeros((m, ncols), dtype=np.int64)
    cdef int64_t[:, ::1] A = arr
    cdef Py_ssize_t i, j, r, col, piv, rank = 0
    cdef int64_t a, b, g, best, x, tmp
    for i, row in enumerate(rows):
        for j, c in row:
            if llabs(c) >= LIMIT:
                raise OverflowError("coefficient too large")
            A[i, j] += c
    for col in range(ncols):
        if rank == m:
            break
        piv = -1
        best = 0
        for r in range(rank, m):
            x = llabs(A[r, col])
            if x != 0 and (piv < 0 or x < best):
                piv = r
                best = x
                if x == 1:
                    break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, ncols):
                tmp = A[piv, j]
                A[piv, j] = A[rank, j]
                A[rank, j] = tmp
        for r in range(rank + 1, m):
            b = A[r, col]
            if b == 0:
                continue
            a = A[rank, col]
            g = _gcd(a, b)
            a //= g
            b //= g
            if llabs(a) >= LIMIT or llabs(b) >= LIMIT:
                raise OverflowError("elimination multiplier too large")
            g = 0
            for j in range(col, ncols):
                x = a * A[r, j] - b * A[rank, j]
                A[r, j] = x
                if x != 0:
                    g = _gcd(g, x)
            if g > 1:
                for j in range(col + 1, ncols):
                    A[r, j] //= g
            for j in range(col + 1, ncols):
                if llabs(A[r, j]) >= LIMIT:
                    raise OverflowError("entry growth exceeds int64 headroom")
        rank += 1
    return rank

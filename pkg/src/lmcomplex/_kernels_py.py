"""Pure-Python rank kernels (fallback for the compiled extension).

Rows are given as sparse lists: ``rank_gf2`` takes column indices,
``rank_int`` takes ``(column, coefficient)`` pairs.
"""

from __future__ import annotations

from math import gcd


def rank_gf2(rows, ncols):
    pivots = {}
    for row in rows:
        r = 0
        for j in row:
            r ^= 1 << j
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def _normalize(row):
    g = 0
    for c in row.values():
        g = gcd(g, c)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        for k in row:
            row[k] //= g
    return row


def rank_int(rows, ncols):
    """Exact rank over the rationals by fraction-free sparse elimination."""
    pivots = {}
    for raw in rows:
        row = {}
        for j, c in raw:
            if c:
                row[j] = row.get(j, 0) + c
        row = {j: c for j, c in row.items() if c}
        while row:
            _normalize(row)
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                break
            a = piv[lead]
            b = row[lead]
            g = gcd(a, b)
            a //= g
            b //= g
            # row <- a*row - b*piv, which kills the lead entry
            new = {j: a * c for j, c in row.items()}
            for j, c in piv.items():
                v = new.get(j, 0) - b * c
                if v:
                    new[j] = v
                else:
                    new.pop(j, None)
            row = new
    return len(pivots)

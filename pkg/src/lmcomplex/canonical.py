"""Canonical labels for 2-complexes.

Colour refinement on the vertex/face incidence structure followed by
individualisation over the first non-singleton cell.  Every leaf of the
search gives a vertex order; the label is the smallest encoding over all
leaves, so two complexes get equal labels exactly when they are isomorphic.
"""

from __future__ import annotations

from .complex import Complex2


def _refine(colors: dict[int, int], S: Complex2) -> dict[int, int]:
    while True:
        sigs = {}
        for x in S.vertices:
            nb = sorted(colors[y] for y in S.neighbors[x])
            cof = sorted(
                tuple(sorted(colors[y] for y in fc if y != x)) for fc in S.vertex_faces[x]
            )
            sigs[x] = (colors[x], tuple(nb), tuple(cof))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {x: ranks[sigs[x]] for x in S.vertices}
        if len(ranks) == len(set(colors.values())):
            return new
        colors = new


def _individualize(colors: dict[int, int], x: int) -> dict[int, int]:
    keyed = {y: (c, 0 if y == x else 1) for y, c in colors.items()}
    ranks = {k: i for i, k in enumerate(sorted(set(keyed.values())))}
    return {y: ranks[k] for y, k in keyed.items()}


def _encode(S: Complex2, pos: dict[int, int]) -> tuple:
    faces = tuple(sorted(tuple(sorted(pos[x] for x in fc)) for fc in S.faces))
    edges = tuple(sorted(tuple(sorted(pos[x] for x in ed)) for ed in S.edges))
    return (S.v, faces, edges)


def canonical_order(S: Complex2) -> tuple[tuple, dict[int, int]]:
    """Smallest encoding and a vertex -> position map realising it."""
    start = _refine({x: 0 for x in S.vertices}, S)
    best: list = [None, None]

    def search(colors: dict[int, int]) -> None:
        cells: dict[int, list[int]] = {}
        for x, c in colors.items():
            cells.setdefault(c, []).append(x)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            code = _encode(S, colors)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, dict(colors)
            return
        for x in sorted(target):
            search(_refine(_individualize(colors, x), S))

    search(start)
    return best[0], best[1]


def canonical_form(S: Complex2) -> bytes:
    code, _ = canonical_order(S)
    return repr(code).encode()


def are_isomorphic(A: Complex2, B: Complex2) -> bool:
    if (A.v, A.e, A.f) != (B.v, B.e, B.f):
        return False
    return canonical_form(A) == canonical_form(B)

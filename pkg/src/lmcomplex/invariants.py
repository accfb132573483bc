"""Exact density and degree invariants, and simplicial Betti numbers.

All ratios are :class:`fractions.Fraction`; no floating point is used here.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .complex import Complex2, ComplexError, Face, face_edges

BRUTE_FACE_CAP = 20


@dataclass(frozen=True)
class DensityReport:
    mu: Fraction
    l_invariant: int
    chi: int
    f: int
    v: int
    identity_check: bool


@dataclass(frozen=True)
class MuTildeResult:
    value: Fraction
    witness: tuple[Face, ...]
    nodes_explored: int


@dataclass(frozen=True)
class DegreeReport:
    histogram: dict[int, int]
    l_k: dict[int, int]
    average_degree: Fraction
    lemma_bound: dict[int, Fraction] = field(default_factory=dict)

    def count_at_most(self, k: int) -> int:
        return sum(c for d, c in self.histogram.items() if d <= k)


@dataclass(frozen=True)
class BettiVector:
    b0: int
    b1: int
    b2: int
    field: str

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.b0, self.b1, self.b2)


def _require_faces(S: Complex2) -> None:
    if S.f == 0:
        raise ComplexError("complex has no faces")


def mu(S: Complex2) -> Fraction:
    """Vertices over faces, counting only vertices that lie in a face."""
    _require_faces(S)
    v = len({x for fc in S.faces for x in fc})
    return Fraction(v, S.f)


def l_invariant(S: Complex2) -> int:
    """Sum over edges of ``2 - deg(e)``."""
    return sum(2 - len(fs) for fs in S.edge_faces.values())


def density_report(S: Complex2) -> DensityReport:
    P = S.pure_part() if S.f else S
    _require_faces(P)
    m = mu(P)
    chi = P.euler_characteristic()
    L = l_invariant(P)
    ident = m == Fraction(1, 2) + Fraction(2 * chi + L, 2 * P.f)
    return DensityReport(m, L, chi, P.f, P.v, ident)


def disc_mu(v: int, v_i: int) -> Fraction:
    """mu of a triangulated disc with ``v`` vertices, ``v_i`` of them internal."""
    if v < 3 or not 0 <= v_i <= v - 3:
        raise ValueError(f"need v >= 3 and 0 <= v_i <= v - 3, got v={v}, v_i={v_i}")
    return Fraction(v, v + v_i - 2)


# -- mu tilde ------------------------------------------------------------------

def _better(cand: tuple, best: tuple | None) -> bool:
    return best is None or cand < best


def _key(value: Fraction, faces: tuple[Face, ...]) -> tuple:
    return (value, len(faces), faces)


def mu_tilde_brute(S: Complex2, cap: int = BRUTE_FACE_CAP) -> MuTildeResult:
    """Minimum of mu over every nonempty face subset."""
    _require_faces(S)
    if S.f > cap:
        raise ValueError(f"brute force limited to {cap} faces, complex has {S.f}")
    faces = S.faces
    index = {x: i for i, x in enumerate(S.vertices)}
    masks = [sum(1 << index[x] for x in fc) for fc in faces]
    best = None
    nodes = 0
    n = len(faces)
    # vertex mask of every subset, built from the subset without its top bit
    vmask = [0] * (1 << n)
    for sub in range(1, 1 << n):
        top = sub.bit_length() - 1
        vm = vmask[sub ^ (1 << top)] | masks[top]
        vmask[sub] = vm
        nodes += 1
        k = sub.bit_count() if hasattr(int, "bit_count") else bin(sub).count("1")
        value = Fraction(bin(vm).count("1"), k)
        if best is not None and value > best[0]:
            continue
        chosen = tuple(faces[i] for i in range(n) if sub >> i & 1)
        cand = _key(value, chosen)
        if _better(cand, best):
            best = cand
    return MuTildeResult(best[0], best[2], nodes)


def mu_tilde_bnb(S: Complex2) -> MuTildeResult:
    """Branch and bound over vertex subsets.

    A minimising face set with the fewest faces is always the full set of
    faces spanned by its vertices, so it suffices to search vertex subsets
    ``U`` and score the faces induced on ``U``.  Vertices are decided in order
    of decreasing face degree.  For a partial choice, each undecided vertex
    can add at most the number of still-possible faces through it; sorting
    those gains gives a lower bound on every completion's ratio.
    """
    _require_faces(S)
    P = S.pure_part()
    verts = sorted(P.vertices, key=lambda x: (-len(P.vertex_faces[x]), x))
    pos = {x: i for i, x in enumerate(verts)}
    n = len(verts)
    # faces listed under the latest-decided of their vertices
    closing: list[list[tuple[int, int, Face]]] = [[] for _ in range(n)]
    through: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for fc in P.faces:
        ps = sorted(pos[x] for x in fc)
        closing[ps[2]].append((ps[0], ps[1], fc))
        for i, p in enumerate(ps):
            others = [q for q in ps if q != p]
            through[p].append((others[0], others[1]))

    whole = _key(Fraction(P.v, P.f), P.faces)
    best = [whole]
    nodes = [0]
    included = [False] * n
    excluded = [False] * n

    def bound(i: int, k_u: int, faces_u: int) -> Fraction | None:
        gains = []
        for r in range(i, n):
            g = 0
            for a, b in through[r]:
                if not excluded[a] and not excluded[b]:
                    g += 1
            if g:
                gains.append(g)
        gains.sort(reverse=True)
        lb = None
        num, den = k_u, faces_u
        if den:
            lb = Fraction(num, den)
        for g in gains:
            num += 1
            den += g
            val = Fraction(num, den)
            if lb is None or val < lb:
                lb = val
        return lb

    def visit(i: int, k_u: int, induced: list[Face]) -> None:
        nodes[0] += 1
        if induced:
            value = Fraction(k_u, len(induced))
            if value <= best[0][0]:
                cand = _key(value, tuple(sorted(induced)))
                if cand < best[0]:
                    best[0] = cand
        if i == n:
            return
        lb = bound(i, k_u, len(induced))
        if lb is None or lb > best[0][0]:
            return
        # include vertex i
        included[i] = True
        added = [fc for a, b, fc in closing[i] if included[a] and included[b]]
        visit(i + 1, k_u + 1, induced + added)
        included[i] = False
        # exclude vertex i
        excluded[i] = True
        visit(i + 1, k_u, induced)
        excluded[i] = False

    visit(0, 0, [])
    value, _, witness = best[0]
    return MuTildeResult(value, witness, nodes[0])


def mu_tilde(S: Complex2, mode: str = "branch_and_bound", cap: int = BRUTE_FACE_CAP) -> MuTildeResult:
    if mode == "brute":
        return mu_tilde_brute(S, cap)
    if mode == "branch_and_bound":
        return mu_tilde_bnb(S)
    raise ValueError(f"unknown mode {mode!r}")


# -- degrees -------------------------------------------------------------------

def degree_report(S: Complex2) -> DegreeReport:
    from .complex import classify_surface

    degs = [S.vertex_degree(x) for x in S.vertices]
    hist = dict(sorted(Counter(degs).items()))
    if degs:
        ks = range(min(degs), max(degs) + 1)
        l_k = {k: sum(1 for d in degs if d <= k) for k in ks}
        avg = Fraction(sum(degs), len(degs))
    else:
        l_k, avg = {}, Fraction(0)
    bounds = {}
    info = classify_surface(S)
    if info.is_closed_surface:
        chi = info.euler_characteristic
        top = max(20, max(degs))
        bounds = {k: lemma_bound(k, S.v, chi) for k in range(6, top + 1)}
    return DegreeReport(hist, l_k, avg, bounds)


def lemma_bound(k: int, v: int, chi: int) -> Fraction:
    """Lower bound on the number of vertices of degree at most ``k`` (k >= 6)."""
    if k < 6:
        raise ValueError("bound holds for k >= 6")
    return Fraction((k - 5) * v + 6 * chi, k - 2)


# -- homology ------------------------------------------------------------------

def boundary_rows(S: Complex2) -> tuple[list[list[tuple[int, int]]], int]:
    """Rows of the face-to-edge boundary matrix in sparse form."""
    col = {ed: j for j, ed in enumerate(S.edges)}
    rows = []
    for fc in S.faces:
        ab, ac, bc = face_edges(fc)
        rows.append([(col[bc], 1), (col[ac], -1), (col[ab], 1)])
    return rows, len(S.edges)


def boundary_rank(S: Complex2, field: str = linalg.RATIONALS, backend: str | None = None) -> int:
    if S.f == 0:
        return 0
    rows, ncols = boundary_rows(S)
    return linalg.rank(rows, ncols, field, backend)


def betti_numbers(S: Complex2, field: str = linalg.RATIONALS, backend: str | None = None) -> BettiVector:
    b0 = len(S.components())
    r2 = boundary_rank(S, field, backend)
    r1 = S.v - b0
    return BettiVector(b0, S.e - r1 - r2, S.f - r2, field)


def all_pure_subcomplexes(S: Complex2):
    """Every nonempty face subset; only sensible for tiny complexes."""
    for k in range(1, S.f + 1):
        yield from combinations(S.faces, k)

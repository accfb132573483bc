"""Subcomplex search, low-degree configurations, forbidden lists and certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .canonical import canonical_form
from .complex import Complex2, ComplexError, Face, classify_surface, face_edges
from .invariants import l_invariant, mu, mu_tilde
from .surfaces import (catalog, collapse, enumerate_regular_quotients,
                       random_sphere_triangulation)

log = logging.getLogger(__name__)


# -- embeddings ----------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    pattern: Complex2
    host: Complex2
    vertex_map: dict[int, int]

    def image_faces(self) -> tuple[Face, ...]:
        return tuple(sorted(tuple(sorted(self.vertex_map[x] for x in fc))
                            for fc in self.pattern.faces))


def _face_order(P: Complex2) -> list[Face]:
    """Pattern faces so that each one shares as many vertices as possible with earlier ones."""
    remaining = list(P.faces)
    order: list[Face] = []
    placed: set[int] = set()
    while remaining:
        best = max(remaining, key=lambda fc: (len(placed & set(fc)),
                                              sum(len(P.vertex_faces[x]) for x in fc)))
        remaining.remove(best)
        order.append(best)
        placed |= set(best)
    return order


def _host_candidates(H: Complex2, pat_face: Face, vmap: dict[int, int]):
    """Host faces consistent with the vertices of ``pat_face`` already mapped."""
    mapped = [vmap[x] for x in pat_face if x in vmap]
    if len(mapped) >= 2:
        ed = tuple(sorted(mapped[:2]))
        return H.edge_faces.get(ed, ())
    if len(mapped) == 1:
        return H.vertex_faces.get(mapped[0], ())
    return H.faces


def iter_embeddings(pattern: Complex2, host: Complex2):
    """Yield every injective vertex map sending pattern faces onto host faces."""
    if pattern.f == 0:
        raise ComplexError("pattern has no faces")
    P, H = pattern, host
    if P.v > H.v or P.f > H.f:
        return
    order = _face_order(P)
    pdeg = {x: len(P.vertex_faces[x]) for x in P.vertices}
    hdeg = {x: len(fs) for x, fs in H.vertex_faces.items()}
    pedges = {fc: [(u, w, len(P.edge_faces[(u, w)])) for u, w in face_edges(fc)] for fc in P.faces}
    hedge = H.edge_faces
    vmap: dict[int, int] = {}
    used: set[int] = set()

    def rec(i: int):
        if i == len(order):
            yield dict(vmap)
            return
        fc = order[i]
        free = [x for x in fc if x not in vmap]
        fixed = {vmap[x] for x in fc if x in vmap}
        for hf in _host_candidates(H, fc, vmap):
            if not fixed.issubset(hf):
                continue
            rest = [y for y in hf if y not in fixed]
            if len(rest) != len(free):
                continue
            for perm in permutations(rest):
                ok = True
                for x, y in zip(free, perm):
                    if y in used or hdeg[y] < pdeg[x]:
                        ok = False
                        break
                if not ok:
                    continue
                for x, y in zip(free, perm):
                    vmap[x] = y
                    used.add(y)
                for u, w, dp in pedges[fc]:
                    a, b = vmap[u], vmap[w]
                    if len(hedge[(a, b) if a < b else (b, a)]) < dp:
                        break
                else:
                    yield from rec(i + 1)
                for x, y in zip(free, perm):
                    del vmap[x]
                    used.discard(y)

    yield from rec(0)


def find_embedding(pattern: Complex2, host: Complex2, mode: str = "first"):
    """Search for simplicial embeddings of a pure pattern.

    ``first`` returns an :class:`Embedding` or ``None``; ``count`` returns
    the number of injective vertex maps; ``all`` returns every embedding.
    """
    if not pattern.is_pure:
        raise ComplexError("pattern must be pure")
    it = iter_embeddings(pattern, host)
    if mode == "first":
        m = next(it, None)
        return None if m is None else Embedding(pattern, host, m)
    if mode == "count":
        return sum(1 for _ in it)
    if mode == "all":
        return [Embedding(pattern, host, m) for m in it]
    raise ValueError(f"unknown mode {mode!r}")


def distinct_images(embeddings) -> set[tuple[Face, ...]]:
    return {e.image_faces() for e in embeddings}


def count_embeddings_naive(pattern: Complex2, host: Complex2) -> int:
    """Try every injective vertex assignment (oracle for small sizes)."""
    pv = pattern.vertices
    count = 0
    for image in permutations(host.vertices, len(pv)):
        m = dict(zip(pv, image))
        if all(host.has_face(m[x] for x in fc) for fc in pattern.faces):
            count += 1
    return count


# -- tetrahedra ----------------------------------------------------------------

def find_tetrahedra(host: Complex2) -> tuple[list[tuple[int, int, int, int]], bool]:
    """All tetrahedra of ``host`` and whether they are pairwise face disjoint."""
    thirds: dict[tuple[int, int], set[int]] = {}
    for a, b, c in host.faces:
        thirds.setdefault((a, b), set()).add(c)
        thirds.setdefault((a, c), set()).add(b)
        thirds.setdefault((b, c), set()).add(a)
    tets = []
    for a, b, c in host.faces:
        common = thirds[(a, b)] & thirds[(a, c)] & thirds[(b, c)]
        for d in common:
            if d > c:
                tets.append((a, b, c, d))
    tets.sort()
    owner: dict[Face, int] = {}
    disjoint = True
    for i, t in enumerate(tets):
        for fc in combinations(t, 3):
            if fc in owner:
                disjoint = False
            owner[fc] = i
    return tets, disjoint


def tetrahedron_count(host: Complex2) -> int:
    return len(find_tetrahedra(host)[0])


def prune_tetrahedra(Y: Complex2, rule: str = "lexicographic_face") -> Complex2:
    """Remove the lexicographically smallest face of each tetrahedron."""
    if rule != "lexicographic_face":
        raise ValueError(f"unknown rule {rule!r}")
    tets, disjoint = find_tetrahedra(Y)
    if not disjoint:
        raise ComplexError("tetrahedra are not pairwise face disjoint")
    return Y.without_faces(min(combinations(t, 3)) for t in tets)


# -- low degree configurations -------------------------------------------------

@dataclass(frozen=True)
class LowDegreeConfig:
    kind: str
    x: int
    y: int
    z: int
    w: int | None
    degree_bound_used: int
    min_bound: int


def _configs(M: Complex2):
    """Every kind-a face and kind-b face pair, with its largest degree."""
    deg = {x: M.vertex_degree(x) for x in M.vertices}
    for fc in M.faces:
        yield max(deg[u] for u in fc), ("a",) + fc + (None,)
    for (p, q), fs in M.edge_faces.items():
        if len(fs) != 2:
            continue
        f1, f2 = fs
        o1 = next(u for u in f1 if u not in (p, q))
        o2 = next(u for u in f2 if u not in (p, q))
        if o1 == o2:
            continue
        # y is one endpoint of the shared edge, w the other
        for y, w in ((p, q), (q, p)):
            x, z = sorted((o1, o2))
            yield max(deg[x], deg[y], deg[z]), ("b", x, y, z, w)


def low_degree_configuration(M: Complex2, d: int) -> LowDegreeConfig | None:
    info = classify_surface(M)
    if not info.is_closed_surface:
        raise ComplexError("low-degree configurations need a closed surface")
    best_a = best_b = None
    min_bound = None
    for bound, cfg in _configs(M):
        if min_bound is None or bound < min_bound:
            min_bound = bound
        if bound <= d:
            if cfg[0] == "a" and (best_a is None or cfg < best_a):
                best_a = cfg
            elif cfg[0] == "b" and (best_b is None or cfg < best_b):
                best_b = cfg
    cfg = best_a or best_b
    if cfg is None:
        return None
    kind, x, y, z, w = cfg
    return LowDegreeConfig(kind, x, y, z, w, d, min_bound)


def all_low_degree_triples(M: Complex2, d: int):
    """Every (kind, x, y, z, w) configuration with degrees at most ``d``."""
    for bound, cfg in _configs(M):
        if bound <= d:
            yield cfg


# -- forbidden list ------------------------------------------------------------

def _sigma() -> Complex2:
    return catalog("sigma3")


def _condition4(S: Complex2, x: int, y: int, z: int) -> str | None:
    """Which form of the adjacency condition holds for (x, y, z), if any."""
    if S.has_face((x, y, z)):
        return "face"
    for w in S.vertices:
        if w in (x, y, z):
            continue
        if S.has_face((x, y, w)) and S.has_face((y, z, w)):
            return "xyw-yzw"
    for w in S.vertices:
        if w in (x, y, z):
            continue
        if S.has_face((x, y, w)) and S.has_face((x, z, w)):
            return "xyw-xzw"
    return None


@dataclass
class ForbiddenList:
    degree_bound: int
    face_cap: int
    sphere_budget: dict
    members_L1: list[Complex2]
    members_Lprime: list[Complex2]
    members_L2: list[Complex2]
    labels_Lprime: list[bytes] = field(default_factory=list)
    labels_L2: list[bytes] = field(default_factory=list)
    provenance: dict[bytes, dict] = field(default_factory=dict)
    complete: bool = False
    partial: bool = False

    @property
    def members(self) -> list[Complex2]:
        return self.members_L1 + self.members_L2


def _sphere_corpus(budget: dict) -> list[tuple[str, Complex2]]:
    spheres = [(f"given:{i}", S) for i, S in enumerate(budget.get("spheres", ()))]
    count = int(budget.get("count", 0))
    vmax = int(budget.get("max_vertices", 4))
    seed = int(budget.get("seed", 0))
    for i in range(count):
        v = 4 + i % max(1, vmax - 3)
        s = seed * 1_000_003 + i
        spheres.append((f"random(v={v},seed={s})", random_sphere_triangulation(v, s)))
    return spheres


def build_forbidden_list(d: int, F: int, sphere_budget: dict, max_merges: int = 2,
                         max_members: int | None = None) -> ForbiddenList:
    """Desk-scale forbidden list for degree bound ``d`` and face cap ``F``.

    ``sphere_budget`` holds ``count``, ``max_vertices`` and ``seed`` for the
    generated spheres and optionally ``spheres``, a list of explicit sphere
    triangulations processed first.  The result is always incomplete with
    respect to the full list; ``partial`` is set when ``max_members`` cut the
    construction short.
    """
    if d < 3 or F < 4:
        raise ValueError("need d >= 3 and F >= 4")
    out = ForbiddenList(d, F, {k: v for k, v in sphere_budget.items() if k != "spheres"},
                        [_sigma()], [], [])
    seen_prime: set[bytes] = set()
    seen_l2: set[bytes] = set()
    for name, M in _sphere_corpus(sphere_budget):
        local: set[frozenset] = set()
        for kind, x, y, z, w in all_low_degree_triples(M, d):
            faces = set()
            for p in (x, y, z):
                faces.update(M.vertex_faces[p])
            key = frozenset(faces)
            if key in local or len(faces) > F:
                continue
            local.add(key)
            S = M.induced_subcomplex(faces)
            if any(S.link(p)[1] != "cycle" for p in (x, y, z)):
                continue
            form = _condition4(S, x, y, z)
            if form is None:
                continue
            label = canonical_form(S)
            if label in seen_prime:
                continue
            seen_prime.add(label)
            out.members_Lprime.append(S)
            out.labels_Lprime.append(label)
            out.provenance[label] = {"sphere": name, "triple": [x, y, z],
                                     "w": w, "kind": kind, "condition4": form}
            for spec in enumerate_regular_quotients(S, max_merges, cap=max(F, 30), with_specs=True):
                Q = spec.quotient
                if find_tetrahedra(Q)[0]:
                    continue
                ql = canonical_form(Q)
                if ql in seen_l2:
                    continue
                seen_l2.add(ql)
                out.members_L2.append(Q)
                out.labels_L2.append(ql)
                out.provenance.setdefault(ql, {"sphere": name, "triple": [x, y, z],
                                               "source_label": label.decode(),
                                               "partition": [list(c) for c in spec.partition]})
            if max_members is not None and len(out.members_L2) >= max_members:
                out.partial = True
                log.info("forbidden list stopped at %d members", len(out.members_L2))
                return out
    return out


@dataclass(frozen=True)
class MemberReport:
    f: int
    boundary_count: int
    l_invariant: int
    internal_faces: int
    mu_tilde: Fraction
    closed_sub_mu: Fraction | None
    checks: dict[str, bool]

    @property
    def inequality_holds(self) -> bool:
        return all(self.checks.values())


def verify_list_member(S: Complex2, F: int) -> MemberReport:
    boundary = S.free_edges()
    L = l_invariant(S)
    internal = sum(1 for fc in S.faces if not any(ed in boundary for ed in face_edges(fc)))
    mt = mu_tilde(S).value if S.f else Fraction(0)
    core = collapse(S).core if S.f else None
    closed_mu = mu(core) if core is not None and core.f else None
    checks = {
        "L_le_boundary": L <= len(boundary),
        "boundary_le_f_minus_3": len(boundary) <= S.f - 3,
        "L_le_f_minus_3": L <= S.f - 3,
        "three_internal_faces": internal >= 3,
        "mu_tilde_le_cap": mt <= Fraction(F - 1, F),
    }
    return MemberReport(S.f, len(boundary), L, internal, mt, closed_mu, checks)


# -- certificate ---------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    tetrahedra: tuple[tuple[int, int, int, int], ...]
    pairwise_face_disjoint: bool
    sigma_free: bool
    l2_free: bool
    verdict: str
    witness: Embedding | None = None
    note: str = ""


def certify_asphericable(Y: Complex2, flist: ForbiddenList) -> Certificate:
    """Check the sufficient condition: disjoint tetrahedra and no list member inside."""
    tets, disjoint = find_tetrahedra(Y)
    witness = None
    sigma_free = True
    for S in flist.members_L1:
        hit = find_embedding(S, Y, "first")
        if hit is not None:
            sigma_free = False
            witness = hit
            break
    l2_free = True
    if witness is None:
        for S in sorted(flist.members_L2, key=lambda c: (c.f, c.v, canonical_form(c))):
            hit = find_embedding(S, Y, "first")
            if hit is not None:
                l2_free = False
                witness = hit
                break
    if disjoint and sigma_free and l2_free:
        note = "certified against a partial list" if not flist.complete else ""
        return Certificate(tuple(tets), True, True, True, "certified_asphericable", None, note)
    note = ("sufficient condition fails; this does not show the complex is not asphericable"
            if witness is not None and sigma_free else "")
    return Certificate(tuple(tets), disjoint, sigma_free, l2_free, "not_certified", witness, note)

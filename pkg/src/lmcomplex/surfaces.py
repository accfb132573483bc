"""Catalog complexes, sphere and torus generators, collapses and regular quotients."""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from itertools import combinations

from .canonical import canonical_form
from .complex import (Complex2, ComplexError, Edge, Face, build_complex,
                      classify_surface, face_edges)


def _tetra_faces(a, b, c, d):
    return [tuple(sorted(t)) for t in combinations((a, b, c, d), 3)]


def _union_faces(*groups):
    out = []
    for g in groups:
        for fc in g:
            if fc not in out:
                out.append(fc)
    return out


def _icosahedron():
    top, bottom = 1, 12
    upper = [2, 3, 4, 5, 6]
    lower = [7, 8, 9, 10, 11]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces.append((top, upper[i], upper[j]))
        faces.append((bottom, lower[i], lower[j]))
        faces.append((upper[i], upper[j], lower[i]))
        faces.append((upper[j], lower[i], lower[j]))
    return faces


_CATALOG = {
    "tetrahedron": lambda: _tetra_faces(1, 2, 3, 4),
    "bipyramid5": lambda: [(4, 1, 2), (4, 2, 3), (4, 1, 3), (5, 1, 2), (5, 2, 3), (5, 1, 3)],
    "octahedron": lambda: [(5, 1, 2), (5, 2, 3), (5, 3, 4), (5, 1, 4),
                           (6, 1, 2), (6, 2, 3), (6, 3, 4), (6, 1, 4)],
    "icosahedron": _icosahedron,
    "rp2_six": lambda: [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
                        (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)],
    "sigma1": lambda: _union_faces(_tetra_faces(1, 2, 3, 4), _tetra_faces(1, 5, 6, 7)),
    "sigma2": lambda: _union_faces(_tetra_faces(1, 2, 3, 4), _tetra_faces(1, 2, 5, 6)),
    "sigma3": lambda: _union_faces(_tetra_faces(1, 2, 3, 4), _tetra_faces(1, 2, 3, 5)),
}

CATALOG_NAMES = tuple(_CATALOG)


def catalog(name: str) -> Complex2:
    try:
        faces = _CATALOG[name]()
    except KeyError:
        raise ComplexError(f"unknown catalog complex {name!r}; known: {', '.join(CATALOG_NAMES)}") from None
    return build_complex(faces)


# -- mutable closed-surface state used by the generators ----------------------

class _IndexedSet:
    """Set with O(1) add, remove and uniform random choice."""

    def __init__(self):
        self.items: list = []
        self.pos: dict = {}

    def add(self, x) -> None:
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x) -> None:
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def choice(self, rng: random.Random):
        return self.items[rng.randrange(len(self.items))]

    def __len__(self) -> int:
        return len(self.items)


class _Surface:
    def __init__(self, faces):
        self.faces = _IndexedSet()
        self.edges = _IndexedSet()
        self.edge_faces: dict[Edge, set[Face]] = {}
        self.nbrs: dict[int, set[int]] = {}
        for fc in faces:
            self.add(tuple(sorted(fc)))

    def add(self, fc: Face) -> None:
        self.faces.add(fc)
        for ed in face_edges(fc):
            if ed not in self.edge_faces:
                self.edge_faces[ed] = set()
                self.edges.add(ed)
            self.edge_faces[ed].add(fc)
            a, b = ed
            self.nbrs.setdefault(a, set()).add(b)
            self.nbrs.setdefault(b, set()).add(a)

    def remove(self, fc: Face) -> None:
        self.faces.discard(fc)
        for ed in face_edges(fc):
            s = self.edge_faces[ed]
            s.discard(fc)
            if not s:
                del self.edge_faces[ed]
                self.edges.discard(ed)
                a, b = ed
                self.nbrs[a].discard(b)
                self.nbrs[b].discard(a)

    def subdivide(self, fc: Face, new: int) -> None:
        a, b, c = fc
        self.remove(fc)
        for t in ((a, b, new), (a, c, new), (b, c, new)):
            self.add(tuple(sorted(t)))

    def flip(self, ed: Edge) -> bool:
        """Replace edge ab (faces abc, abd) by cd; refuses if cd already exists."""
        fs = self.edge_faces.get(ed)
        if not fs or len(fs) != 2:
            return False
        a, b = ed
        f1, f2 = sorted(fs)
        c = next(x for x in f1 if x not in ed)
        d = next(x for x in f2 if x not in ed)
        if c == d or d in self.nbrs[c]:
            return False
        self.remove(f1)
        self.remove(f2)
        self.add(tuple(sorted((a, c, d))))
        self.add(tuple(sorted((b, c, d))))
        return True

    def random_flip(self, rng: random.Random) -> bool:
        return self.flip(self.edges.choice(rng))

    def to_complex(self) -> Complex2:
        return build_complex(sorted(self.faces.items))


def random_sphere_triangulation(v: int, seed: int = 0, flips_per_vertex: int = 3,
                                interleave: bool = True) -> Complex2:
    """Random simplicial 2-sphere with exactly ``v`` vertices.

    Grows the tetrahedron by random 1-3 face subdivisions, with one random
    flip attempt after each, then makes ``flips_per_vertex * v`` further flip
    attempts.  Flips that would create an existing edge are skipped.
    """
    if v < 4:
        raise ValueError("a simplicial sphere needs at least 4 vertices")
    rng = random.Random(seed)
    surf = _Surface(_tetra_faces(1, 2, 3, 4))
    for new in range(5, v + 1):
        surf.subdivide(surf.faces.choice(rng), new)
        if interleave:
            surf.random_flip(rng)
    for _ in range(flips_per_vertex * v):
        surf.random_flip(rng)
    out = surf.to_complex()
    info = classify_surface(out)
    if info.surface_name != "sphere" or out.v != v:
        raise AssertionError(f"generator produced {info.surface_name} with v={out.v}")
    return out


def flip_perturb(S: Complex2, attempts: int, seed: int = 0) -> Complex2:
    """Random edge flips on a closed surface; topology type is preserved."""
    rng = random.Random(seed)
    surf = _Surface(S.faces)
    for _ in range(attempts):
        surf.random_flip(rng)
    return surf.to_complex()


def grid_torus_triangulation(m: int, k: int) -> Complex2:
    """The m-by-k grid torus, vertex (i, j) numbered ``i*k + j + 1``."""
    if m < 3 or k < 3:
        raise ComplexError(f"grid torus ({m}, {k}) is not simplicial; need m, k >= 3")

    def vid(i, j):
        return (i % m) * k + (j % k) + 1

    faces = []
    for i in range(m):
        for j in range(k):
            faces.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            faces.append((vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)))
    out = build_complex(faces)
    if out.f != 2 * m * k or out.e != 3 * m * k or classify_surface(out).surface_name != "torus":
        raise ComplexError(f"grid torus ({m}, {k}) is not simplicial")
    return out


# -- collapses -----------------------------------------------------------------

@dataclass(frozen=True)
class CollapseResult:
    core: Complex2
    removed: tuple[tuple[Edge, Face], ...]
    outcome: str
    residual_graph: tuple[Edge, ...]

    def remaining(self) -> Complex2:
        """Core together with the residual graph."""
        return build_complex(self.core.faces, self.residual_graph)


def collapse(S: Complex2, seed: int | None = None) -> CollapseResult:
    """Collapse free edges until none remain.

    The lexicographically smallest free edge goes first; with ``seed`` the
    free edge is chosen uniformly at random instead.
    """
    edge_faces = {ed: set(fs) for ed, fs in S.edge_faces.items()}
    alive = set(S.faces)
    removed = []
    rng = random.Random(seed) if seed is not None else None
    heap = [ed for ed, fs in edge_faces.items() if len(fs) == 1]
    heapq.heapify(heap)
    pool = set(heap)
    while pool:
        if rng is None:
            ed = heapq.heappop(heap)
            if ed not in pool:
                continue
        else:
            ed = rng.choice(sorted(pool))
        pool.discard(ed)
        fs = edge_faces.get(ed)
        if not fs or len(fs) != 1:
            continue
        (fc,) = fs
        removed.append((ed, fc))
        alive.discard(fc)
        del edge_faces[ed]
        for other in face_edges(fc):
            if other == ed:
                continue
            s = edge_faces[other]
            s.discard(fc)
            if len(s) == 1:
                pool.add(other)
                if rng is None:
                    heapq.heappush(heap, other)
            elif not s:
                pool.discard(other)
    core_faces = sorted(alive)
    core = build_complex(core_faces)
    residual = tuple(sorted(ed for ed, fs in edge_faces.items() if not fs))
    if not core_faces:
        outcome = "graph"
    elif residual:
        outcome = "mixed"
    else:
        outcome = "closed_core"
    return CollapseResult(core, tuple(removed), outcome, residual)


# -- simplicial maps and regular quotients -------------------------------------

class NonSimplicialMap(ValueError):
    """A vertex assignment that does not carry faces onto target faces."""


@dataclass(frozen=True)
class SimplicialMap:
    source: Complex2
    target: Complex2
    vertex_assignment: dict[int, int]

    def __post_init__(self):
        missing = [x for x in self.source.vertices if x not in self.vertex_assignment]
        if missing:
            raise ComplexError(f"assignment is not total; missing {missing}")

    def image(self, simplex) -> tuple[int, ...]:
        return tuple(sorted({self.vertex_assignment[x] for x in simplex}))

    def face_images(self) -> dict[Face, tuple[int, ...]]:
        return {fc: self.image(fc) for fc in self.source.faces}

    def edge_images(self) -> dict[Edge, tuple[int, ...]]:
        return {ed: self.image(ed) for ed in self.source.edges}


@dataclass(frozen=True)
class QuotientSpec:
    partition: tuple[tuple[int, ...], ...]
    map: SimplicialMap
    regular: bool
    violation: dict | None = None
    edge_image_collisions: int = 0

    @property
    def quotient(self) -> Complex2:
        return self.map.target


def _normalize_partition(S: Complex2, partition) -> tuple[tuple[int, ...], ...]:
    classes = [tuple(sorted(int(x) for x in c)) for c in partition]
    seen: set[int] = set()
    for c in classes:
        if not c:
            raise ComplexError("empty partition class")
        if seen & set(c):
            raise ComplexError("partition classes overlap")
        seen |= set(c)
    if seen != set(S.vertices):
        raise ComplexError("partition does not cover the vertex set exactly")
    return tuple(sorted(classes))


def _check_conditions(m: SimplicialMap) -> tuple[dict | None, int]:
    """Dimension preservation, then the face-identification condition."""
    degenerate = []
    for ed, img in m.edge_images().items():
        if len(img) < 2:
            degenerate.append(ed)
    for fc, img in m.face_images().items():
        if len(img) < 3:
            degenerate.append(fc)
    collisions = 0
    by_img: dict[tuple, list] = {}
    for ed, img in m.edge_images().items():
        by_img.setdefault(img, []).append(ed)
    for group in by_img.values():
        collisions += len(group) * (len(group) - 1) // 2
    if degenerate:
        return {"kind": "degenerate_simplex", "witnesses": sorted(degenerate)}, collisions
    by_face: dict[tuple, list[Face]] = {}
    for fc, img in m.face_images().items():
        by_face.setdefault(img, []).append(fc)
    bad = []
    for group in by_face.values():
        for s1, s2 in combinations(group, 2):
            if len(set(s1) & set(s2)) >= 2:
                bad.append((s1, s2))
    if bad:
        return {"kind": "shared_edge_images", "witnesses": sorted(bad)}, collisions
    return None, collisions


def quotient_by_partition(S: Complex2, partition) -> QuotientSpec:
    classes = _normalize_partition(S, partition)
    assign = {x: c[0] for c in classes for x in c}
    faces = set()
    edges = set()
    for fc in S.faces:
        img = tuple(sorted({assign[x] for x in fc}))
        if len(img) == 3:
            faces.add(img)
        elif len(img) == 2:
            edges.add(img)
    for ed in S.edges:
        img = tuple(sorted({assign[x] for x in ed}))
        if len(img) == 2:
            edges.add(img)
    target = build_complex(sorted(faces), sorted(edges))
    m = SimplicialMap(S, target, assign)
    violation, coll = _check_conditions(m)
    return QuotientSpec(classes, m, violation is None, violation, coll)


def is_regular_quotient(m: SimplicialMap) -> tuple[bool, dict | None]:
    """Check both regularity conditions and surjectivity for an explicit map."""
    tgt = m.target
    for fc, img in m.face_images().items():
        if len(img) != 3 or not tgt.has_face(img):
            raise NonSimplicialMap(f"face {fc} maps to {img}, which is not a target face")
    for ed, img in m.edge_images().items():
        if len(img) == 2 and not tgt.has_edge(*img):
            raise NonSimplicialMap(f"edge {ed} maps to {img}, which is not a target edge")
        if len(img) == 1 and img[0] not in tgt.neighbors:
            raise NonSimplicialMap(f"edge {ed} maps to a vertex outside the target")
    violation, _ = _check_conditions(m)
    if violation is not None:
        return False, violation
    hit_faces = set(m.face_images().values())
    hit_edges = {img for img in m.edge_images().values() if len(img) == 2}
    hit_verts = set(m.vertex_assignment[x] for x in m.source.vertices)
    missing = (set(tgt.faces) - hit_faces) | (set(tgt.edges) - hit_edges) | {
        (x,) for x in set(tgt.vertices) - hit_verts}
    if missing:
        return False, {"kind": "not_surjective", "witnesses": sorted(missing)}
    return True, None


QUOTIENT_FACE_CAP = 30


def enumerate_regular_quotients(S: Complex2, max_merges: int, cap: int = QUOTIENT_FACE_CAP,
                                with_specs: bool = False):
    """All regular quotients using at most ``max_merges`` vertex identifications.

    Partitions are walked as restricted growth strings.  A vertex is never
    put in a class holding one of its neighbours (that degenerates an edge),
    and a branch is abandoned as soon as two fully assigned faces with equal
    image share an edge.  Results are deduplicated up to isomorphism and the
    trivial quotient comes first.
    """
    if S.f > cap:
        raise ValueError(f"quotient enumeration limited to {cap} faces, complex has {S.f}")
    verts = list(S.vertices)
    pos = {x: i for i, x in enumerate(verts)}
    n = len(verts)
    # faces become fully assigned at their last vertex
    closing: list[list[Face]] = [[] for _ in range(n)]
    for fc in S.faces:
        closing[max(pos[x] for x in fc)].append(fc)
    classes: list[list[int]] = []
    cls_of: dict[int, int] = {}
    images: dict[tuple, list[Face]] = {}
    seen: dict[bytes, QuotientSpec] = {}
    order: list[bytes] = []

    def image_of(fc):
        return tuple(sorted(cls_of[x] for x in fc))

    def add_faces(i) -> list[tuple] | None:
        added = []
        for fc in closing[i]:
            img = image_of(fc)
            for other in images.get(img, ()):
                if len(set(other) & set(fc)) >= 2:
                    for k in added:
                        images[k].pop()
                    return None
            images.setdefault(img, []).append(fc)
            added.append(img)
        return added

    def walk(i: int, merges: int) -> None:
        if i == n:
            spec = quotient_by_partition(S, [[verts[j] for j in c] for c in classes])
            if spec.regular:
                key = canonical_form(spec.quotient)
                if key not in seen:
                    seen[key] = spec
                    order.append(key)
            return
        x = verts[i]
        options = [(len(classes), True)]
        if merges < max_merges:
            options += [(c, False) for c in range(len(classes))]
        for c, fresh in options:
            if not fresh and any(y in S.neighbors[x] for y in map(verts.__getitem__, classes[c])):
                continue
            if fresh:
                classes.append([i])
            else:
                classes[c].append(i)
            cls_of[x] = c
            added = add_faces(i)
            if added is not None:
                walk(i + 1, merges + (0 if fresh else 1))
                for k in added:
                    images[k].pop()
            del cls_of[x]
            if fresh:
                classes.pop()
            else:
                classes[c].pop()

    walk(0, 0)
    specs = [seen[k] for k in order]
    if with_specs:
        return specs
    return [s.quotient for s in specs]

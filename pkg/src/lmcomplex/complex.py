"""Finite 2-dimensional simplicial complexes.

A :class:`Complex2` is an immutable value holding sorted vertex, edge and
face tuples.  Vertices are positive integers; edges and faces are stored as
sorted tuples.  Bare edges (edges in no face) are allowed, so purity is a
query rather than an invariant.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]
Face = tuple[int, int, int]


class ComplexError(ValueError):
    """Raised for invalid simplicial data."""


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def face_edges(face: Face) -> tuple[Edge, Edge, Edge]:
    a, b, c = face
    return ((a, b), (a, c), (b, c))


@dataclass(frozen=True)
class Complex2:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]
    full_1_skeleton: bool = False

    # -- counts -------------------------------------------------------------

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def f(self) -> int:
        return len(self.faces)

    def __repr__(self) -> str:
        return f"Complex2(v={self.v}, e={self.e}, f={self.f})"

    # -- cached incidence structures ----------------------------------------

    @cached_property
    def face_set(self) -> frozenset[Face]:
        return frozenset(self.faces)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_faces(self) -> dict[Edge, tuple[Face, ...]]:
        """Faces incident to each edge (every edge present, possibly empty)."""
        inc: dict[Edge, list[Face]] = {ed: [] for ed in self.edges}
        for fc in self.faces:
            for ed in face_edges(fc):
                inc[ed].append(fc)
        return {ed: tuple(fs) for ed, fs in inc.items()}

    @cached_property
    def vertex_faces(self) -> dict[int, tuple[Face, ...]]:
        inc: dict[int, list[Face]] = {x: [] for x in self.vertices}
        for fc in self.faces:
            for x in fc:
                inc[x].append(fc)
        return {x: tuple(fs) for x, fs in inc.items()}

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {x: set() for x in self.vertices}
        for a, b in self.edges:
            nb[a].add(b)
            nb[b].add(a)
        return {x: frozenset(s) for x, s in nb.items()}

    def edge_degree(self, edge: Edge) -> int:
        return len(self.edge_faces[_edge(*edge)])

    def vertex_degree(self, x: int) -> int:
        """Degree of ``x`` in the 1-skeleton."""
        return len(self.neighbors[x])

    def has_face(self, face: Iterable[int]) -> bool:
        return tuple(sorted(face)) in self.face_set

    def has_edge(self, a: int, b: int) -> bool:
        return _edge(a, b) in self.edge_set

    # -- elementary queries -------------------------------------------------

    @property
    def is_pure(self) -> bool:
        """True when every edge lies in some face."""
        return all(self.edge_faces[ed] for ed in self.edges)

    @property
    def is_closed(self) -> bool:
        return self.f > 0 and self.is_pure and not self.free_edges()

    def euler_characteristic(self) -> int:
        return self.v - self.e + self.f

    def free_edges(self) -> frozenset[Edge]:
        return frozenset(ed for ed, fs in self.edge_faces.items() if len(fs) == 1)

    def bare_edges(self) -> tuple[Edge, ...]:
        return tuple(ed for ed in self.edges if not self.edge_faces[ed])

    def star(self, x: int) -> "Complex2":
        self._require_vertex(x)
        fs = self.vertex_faces[x]
        if not fs:
            return build_complex([], [ed for ed in self.edges if x in ed])
        return build_complex(fs)

    def link(self, x: int) -> tuple[tuple[Edge, ...], str]:
        """Link graph of ``x`` and its shape: ``cycle``, ``path`` or ``other``."""
        self._require_vertex(x)
        link_edges = sorted(_edge(*[y for y in fc if y != x]) for fc in self.vertex_faces[x])
        return tuple(link_edges), _graph_shape(link_edges)

    def pure_part(self) -> "Complex2":
        """The union of all faces (drops bare edges and their endpoints)."""
        if self.is_pure and all(self.vertex_faces[x] for x in self.vertices):
            return self
        return build_complex(self.faces)

    def induced_subcomplex(self, face_subset: Iterable[Sequence[int]]) -> "Complex2":
        fs = {tuple(sorted(fc)) for fc in face_subset}
        if not fs:
            raise ComplexError("empty face subset")
        foreign = fs - self.face_set
        if foreign:
            raise ComplexError(f"faces not in complex: {sorted(foreign)}")
        return build_complex(sorted(fs))

    def without_faces(self, removed: Iterable[Sequence[int]]) -> "Complex2":
        """Drop faces but keep every vertex and edge."""
        gone = {tuple(sorted(fc)) for fc in removed}
        return Complex2(self.vertices, self.edges,
                        tuple(fc for fc in self.faces if fc not in gone),
                        self.full_1_skeleton)

    def relabel(self, mapping: dict[int, int]) -> "Complex2":
        """Apply an injective vertex relabelling."""
        if len(set(mapping[x] for x in self.vertices)) != self.v:
            raise ComplexError("relabelling is not injective")
        faces = [tuple(mapping[x] for x in fc) for fc in self.faces]
        edges = [(mapping[a], mapping[b]) for a, b in self.bare_edges()]
        out = build_complex(faces, edges)
        if out.full_1_skeleton != self.full_1_skeleton:
            out = Complex2(out.vertices, out.edges, out.faces, self.full_1_skeleton)
        return out

    def union(self, other: "Complex2") -> "Complex2":
        faces = sorted(self.face_set | other.face_set)
        edges = sorted(self.edge_set | other.edge_set)
        return build_complex(faces, edges)

    def components(self) -> list[frozenset[int]]:
        """Connected components of the 1-skeleton."""
        seen: set[int] = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self.neighbors[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def _require_vertex(self, x: int) -> None:
        if x not in self.neighbors:
            raise ComplexError(f"unknown vertex {x}")

    def canonical_form(self) -> bytes:
        from .canonical import canonical_form

        return canonical_form(self)


def build_complex(face_list: Iterable[Sequence[int]] = (),
                  extra_edges: Iterable[Sequence[int]] = (),
                  full_1_skeleton: bool = False) -> Complex2:
    """Validate a face list and close it downward.

    Duplicate faces are rejected; edges are the union of face edges and
    ``extra_edges`` with duplicates merged.
    """
    faces: set[Face] = set()
    for raw in face_list:
        fc = tuple(int(x) for x in raw)
        if len(fc) != 3:
            raise ComplexError(f"face {raw!r} does not have three vertices")
        if len(set(fc)) != 3:
            raise ComplexError(f"degenerate face {raw!r}")
        key = tuple(sorted(fc))
        if key in faces:
            raise ComplexError(f"duplicate face {key}")
        faces.add(key)  # type: ignore[arg-type]
    edges: set[Edge] = set()
    for fc in faces:
        edges.update(face_edges(fc))
    for raw in extra_edges:
        ed = tuple(int(x) for x in raw)
        if len(ed) != 2 or ed[0] == ed[1]:
            raise ComplexError(f"degenerate edge {raw!r}")
        edges.add(_edge(*ed))
    verts = {x for ed in edges for x in ed}
    if any(x <= 0 for x in verts):
        raise ComplexError("vertex ids must be positive integers")
    return Complex2(tuple(sorted(verts)), tuple(sorted(edges)), tuple(sorted(faces)),
                    full_1_skeleton)


def full_skeleton(n: int, faces: Iterable[Sequence[int]] = ()) -> Complex2:
    """Complex on vertices ``1..n`` containing every edge plus ``faces``."""
    edges = list(combinations(range(1, n + 1), 2))
    return build_complex(faces, edges, full_1_skeleton=True)


def _graph_shape(edges: Sequence[Edge]) -> str:
    if not edges:
        return "other"
    deg: dict[int, int] = defaultdict(int)
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        adj[a].append(b)
        adj[b].append(a)
    # connectedness
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(adj):
        return "other"
    degs = sorted(deg.values())
    if all(d == 2 for d in degs) and len(edges) >= 3:
        return "cycle"
    if degs.count(1) == 2 and all(d <= 2 for d in degs) and len(edges) == len(adj) - 1:
        return "path"
    return "other"


# -- surfaces -----------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceInfo:
    is_closed_surface: bool
    euler_characteristic: int
    orientable: bool
    surface_name: str


def surface_name(chi: int, orientable: bool) -> str:
    if orientable and chi == 2:
        return "sphere"
    if orientable and chi == 0:
        return "torus"
    if not orientable and chi == 1:
        return "projective-plane"
    if not orientable and chi == 0:
        return "klein-bottle"
    return f"other(chi={chi}, {'orientable' if orientable else 'non-orientable'})"


def classify_surface(S: Complex2) -> SurfaceInfo:
    chi = S.euler_characteristic()
    not_surface = SurfaceInfo(False, chi, False, "not-a-surface")
    if S.f == 0 or not S.is_pure:
        return not_surface
    if any(len(fs) != 2 for fs in S.edge_faces.values()):
        return not_surface
    if any(S.link(x)[1] != "cycle" for x in S.vertices):
        return not_surface
    if len(S.components()) != 1:
        return not_surface
    orientable = _orientable(S)
    return SurfaceInfo(True, chi, orientable, surface_name(chi, orientable))


def _orientable(S: Complex2) -> bool:
    """BFS propagation of face orientations across degree-2 edges."""
    # orientation stored as +1 (sorted order a<b<c) or -1
    orient: dict[Face, int] = {}

    def induced(fc: Face, o: int, ed: Edge) -> int:
        # sign with which the oriented face traverses edge ed as (ed[0] -> ed[1])
        a, b, c = fc
        cyc = [(a, b), (b, c), (c, a)]
        s = 1 if ed in cyc else -1
        return s * o

    for seed in S.faces:
        if seed in orient:
            continue
        orient[seed] = 1
        queue = deque([seed])
        while queue:
            fc = queue.popleft()
            for ed in face_edges(fc):
                for other in S.edge_faces[ed]:
                    if other == fc:
                        continue
                    want = -induced(fc, orient[fc], ed)
                    # pick orientation of `other` traversing ed with sign `want`
                    o = 1 if induced(other, 1, ed) == want else -1
                    if other in orient:
                        if orient[other] != o:
                            return False
                    else:
                        orient[other] = o
                        queue.append(other)
    return True

import random
from itertools import combinations

import pytest

from lmcomplex.complex import build_complex, full_skeleton
from lmcomplex.surfaces import catalog


def random_complex(rng: random.Random, max_vertices=7, max_faces=12, bare_edges=True):
    """Random pure-ish complex on a small vertex set, optionally with bare edges."""
    n = rng.randint(3, max_vertices)
    triples = list(combinations(range(1, n + 1), 3))
    k = rng.randint(1, min(max_faces, len(triples)))
    faces = rng.sample(triples, k)
    edges = []
    if bare_edges and rng.random() < 0.5:
        pairs = list(combinations(range(1, n + 2), 2))
        edges = rng.sample(pairs, rng.randint(1, 3))
    return build_complex(faces, edges)


def random_relabel(S, rng: random.Random):
    targets = rng.sample(range(1, 10 * S.v + 10), S.v)
    return S.relabel(dict(zip(S.vertices, targets)))


@pytest.fixture
def tetra():
    return catalog("tetrahedron")


@pytest.fixture
def octa():
    return catalog("octahedron")


@pytest.fixture
def triangle():
    return build_complex([(1, 2, 3)])


@pytest.fixture
def full2_5():
    return full_skeleton(5, combinations(range(1, 6), 3))

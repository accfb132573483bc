import random

import pytest

from lmcomplex.canonical import are_isomorphic, canonical_form
from lmcomplex.complex import ComplexError, build_complex, classify_surface
from lmcomplex.invariants import betti_numbers, mu
from lmcomplex.surfaces import (NonSimplicialMap, SimplicialMap, catalog, collapse,
                                enumerate_regular_quotients, flip_perturb,
                                grid_torus_triangulation, is_regular_quotient,
                                quotient_by_partition, random_sphere_triangulation)
from fractions import Fraction

from conftest import random_complex


class TestCatalog:
    def test_bipyramid(self):
        b = catalog("bipyramid5")
        assert (b.v, b.f) == (5, 6)
        assert classify_surface(b).surface_name == "sphere"

    def test_rp2(self):
        rp2 = catalog("rp2_six")
        assert (rp2.v, rp2.f, rp2.euler_characteristic()) == (6, 10, 1)

    def test_sigma3(self):
        s3 = catalog("sigma3")
        assert (s3.v, s3.f, mu(s3)) == (5, 7, Fraction(5, 7))

    def test_platonic(self):
        for name, (v, f) in {"tetrahedron": (4, 4), "octahedron": (6, 8),
                             "icosahedron": (12, 20)}.items():
            S = catalog(name)
            assert (S.v, S.f) == (v, f)
            assert classify_surface(S).surface_name == "sphere"
        assert set(catalog("icosahedron").vertex_degree(x) for x in range(1, 13)) == {5}

    def test_unknown(self):
        with pytest.raises(ComplexError):
            catalog("dodecahedron")


class TestSphereGenerator:
    def test_v4_is_tetrahedron(self):
        assert random_sphere_triangulation(4, 0) == catalog("tetrahedron")

    def test_v30(self):
        S = random_sphere_triangulation(30, 1)
        assert (S.v, S.f) == (30, 56)

    def test_always_sphere(self):
        for v in range(4, 60, 3):
            for seed in range(3):
                S = random_sphere_triangulation(v, seed)
                assert classify_surface(S).surface_name == "sphere"
                assert S.f == 2 * v - 4 and S.e == 3 * v - 6

    def test_deterministic(self):
        assert random_sphere_triangulation(40, 7) == random_sphere_triangulation(40, 7)
        assert random_sphere_triangulation(40, 7) != random_sphere_triangulation(40, 8)

    def test_too_small(self):
        with pytest.raises(ValueError):
            random_sphere_triangulation(3, 0)

    def test_flips_preserve_type(self):
        T = flip_perturb(grid_torus_triangulation(5, 6), 200, seed=3)
        assert classify_surface(T).surface_name == "torus"
        assert T.f == 2 * T.v


class TestTorus:
    def test_4x4(self):
        T = grid_torus_triangulation(4, 4)
        assert (T.v, T.f, T.euler_characteristic()) == (16, 32, 0)
        assert classify_surface(T).surface_name == "torus"

    def test_3x5(self):
        T = grid_torus_triangulation(3, 5)
        assert (T.v, T.f) == (15, 30)

    def test_2x4_rejected(self):
        with pytest.raises(ComplexError):
            grid_torus_triangulation(2, 4)


class TestCollapse:
    def test_triangle(self, triangle):
        res = collapse(triangle)
        assert res.outcome == "graph"
        assert len(res.residual_graph) == 2

    def test_tetrahedron(self, tetra):
        res = collapse(tetra)
        assert res.outcome == "closed_core" and res.core == tetra and res.removed == ()

    def test_cone_over_square(self):
        cone = build_complex([(5, 1, 2), (5, 2, 3), (5, 3, 4), (5, 1, 4)])
        res = collapse(cone)
        assert res.outcome == "graph"
        # hand-run of the lexicographic order
        assert res.removed == (((1, 2), (1, 2, 5)), ((1, 4), (1, 4, 5)),
                               ((2, 3), (2, 3, 5)), ((3, 4), (3, 4, 5)))
        assert res.residual_graph == ((1, 5), (2, 5), (3, 5), (4, 5))

    def test_mixed(self, tetra):
        S = tetra.union(build_complex([(4, 5, 6)]))
        res = collapse(S)
        assert res.outcome == "mixed" and res.core == tetra

    def test_core_has_no_free_edges_and_idempotent(self):
        rng = random.Random(1)
        for _ in range(100):
            S = random_complex(rng, 7, 14)
            res = collapse(S)
            assert not res.core.free_edges()
            assert (res.outcome == "graph") == (res.core.f == 0)
            if res.core.f:
                again = collapse(res.core)
                assert again.core == res.core and again.removed == ()

    def test_removed_pairs_were_free(self):
        rng = random.Random(2)
        for _ in range(50):
            S = random_complex(rng, 7, 14)
            faces = set(S.faces)
            for ed, fc in collapse(S).removed:
                incident = [g for g in faces if set(ed) <= set(g)]
                assert incident == [fc]
                faces.discard(fc)

    def test_betti_preserved(self):
        rng = random.Random(3)
        for i in range(200):
            S = random_complex(rng, 8, 20)
            res = collapse(S, seed=i if i % 2 else None)
            assert betti_numbers(res.remaining()) == betti_numbers(S)


class TestQuotients:
    def test_identity_partition(self, octa):
        spec = quotient_by_partition(octa, [[x] for x in octa.vertices])
        assert spec.regular and spec.violation is None
        assert are_isomorphic(spec.quotient, octa)

    def test_degenerate(self, triangle):
        spec = quotient_by_partition(triangle, [[1, 2], [3]])
        assert not spec.regular
        assert spec.violation["kind"] == "degenerate_simplex"

    def test_apex_merge(self):
        b = catalog("bipyramid5")
        spec = quotient_by_partition(b, [[1], [2], [3], [4, 5]])
        assert not spec.regular
        assert spec.violation["kind"] == "shared_edge_images"
        assert ((1, 2, 4), (1, 2, 5)) in spec.violation["witnesses"]

    def test_bad_partitions(self, triangle):
        with pytest.raises(ComplexError):
            quotient_by_partition(triangle, [[1, 2]])
        with pytest.raises(ComplexError):
            quotient_by_partition(triangle, [[1, 2], [2, 3]])

    def test_is_regular_identity(self):
        s3 = catalog("sigma3")
        m = SimplicialMap(s3, s3, {x: x for x in s3.vertices})
        assert is_regular_quotient(m) == (True, None)

    def test_constant_map(self):
        s3 = catalog("sigma3")
        with pytest.raises(NonSimplicialMap):
            is_regular_quotient(SimplicialMap(s3, s3, {x: 1 for x in s3.vertices}))

    def test_apex_merge_map(self):
        b = catalog("bipyramid5")
        target = build_complex([(1, 2, 4), (2, 3, 4), (1, 3, 4)])
        ok, violation = is_regular_quotient(SimplicialMap(b, target, {1: 1, 2: 2, 3: 3, 4: 4, 5: 4}))
        assert not ok and violation["kind"] == "shared_edge_images"

    def test_not_surjective(self, triangle):
        target = build_complex([(1, 2, 3), (3, 4, 5)])
        ok, violation = is_regular_quotient(SimplicialMap(triangle, target, {1: 1, 2: 2, 3: 3}))
        assert not ok and violation["kind"] == "not_surjective"

    def test_enumerate_tetrahedron(self, tetra):
        for m in range(4):
            out = enumerate_regular_quotients(tetra, m)
            assert len(out) == 1 and out[0] == tetra

    def test_enumerate_triangle(self, triangle):
        assert enumerate_regular_quotients(triangle, 2) == [triangle]

    def test_octahedron_antipodal_rejected(self, octa):
        spec = quotient_by_partition(octa, [[1, 3], [2, 4], [5, 6]])
        assert spec.violation["kind"] == "shared_edge_images"
        out = enumerate_regular_quotients(octa, 3)
        # exhaustive search: only the trivial quotient survives
        assert [q.v for q in out] == [6]

    def test_enumerate_cap(self):
        with pytest.raises(ValueError):
            enumerate_regular_quotients(random_sphere_triangulation(30, 0), 1)

    def test_enumerated_members_are_regular(self):
        from lmcomplex.patterns import all_low_degree_triples

        nontrivial = 0
        for seed in range(8):
            M = random_sphere_triangulation(12, seed)
            kind, x, y, z, w = next(iter(all_low_degree_triples(M, 17)))
            S = M.induced_subcomplex({fc for p in (x, y, z) for fc in M.vertex_faces[p]})
            specs = enumerate_regular_quotients(S, 2, with_specs=True)
            nontrivial += len(specs) - 1
            labels = [canonical_form(s.quotient) for s in specs]
            assert len(labels) == len(set(labels))
            self._check_specs(S, specs)
        assert nontrivial > 0

    @staticmethod
    def _check_specs(S, specs):
        for spec in specs:
            assert spec.regular
            ok, violation = is_regular_quotient(spec.map)
            assert ok, violation
            # degree of an edge never drops under a regular quotient
            for ed in S.edges:
                img = spec.map.image(ed)
                assert S.edge_degree(ed) <= spec.quotient.edge_degree(img)

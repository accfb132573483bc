import json
import math
from itertools import combinations
from math import comb

import numpy as np
import pytest

from lmcomplex.complex import build_complex
from lmcomplex.invariants import betti_numbers
from lmcomplex.patterns import find_tetrahedra
from lmcomplex.stochastic import (betti_experiment, colex_triples, collapse_experiment,
                                  face_draws, log_probability, p_from_rule, sample_lm,
                                  threshold_experiment)
from lmcomplex.surfaces import catalog


class TestSampling:
    def test_colex_order(self):
        expected = sorted(combinations(range(1, 7), 3), key=lambda t: (t[2], t[1], t[0]))
        assert [tuple(r) for r in colex_triples(6).tolist()] == expected

    def test_p0(self):
        s = sample_lm(10, 0.0, 1)
        assert s.f2 == 0 and s.complex.e == comb(10, 2) and s.complex.v == 10

    def test_p1(self):
        s = sample_lm(9, 1.0, 1)
        assert s.f2 == comb(9, 3)

    def test_full_one_skeleton(self):
        for seed in range(5):
            S = sample_lm(12, 0.2, seed).complex
            assert S.e == comb(12, 2) and S.full_1_skeleton

    def test_mean_f2(self):
        n, p = 30, 0.1
        xs = np.array([sample_lm(n, p, s).f2 for s in range(500)], dtype=float)
        N = comb(n, 3)
        se = math.sqrt(N * p * (1 - p) / len(xs))
        assert abs(xs.mean() - N * p) <= 3 * se

    def test_deterministic(self):
        assert sample_lm(15, 0.3, 42).complex == sample_lm(15, 0.3, 42).complex
        assert sample_lm(15, 0.3, 42).complex != sample_lm(15, 0.3, 43).complex

    def test_coupling_monotone(self):
        draws = face_draws(14, 5)
        prev = set()
        for p in (0.05, 0.1, 0.2, 0.4, 0.8):
            faces = set(sample_lm(14, p, 5, draws).complex.faces)
            assert prev <= faces
            prev = faces

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            sample_lm(10, 1.5, 0)
        with pytest.raises(ValueError):
            sample_lm(10, -0.1, 0)
        with pytest.raises(ValueError):
            sample_lm(2, 0.5, 0)


class TestLogProbability:
    def test_half(self):
        for seed in range(3):
            s = sample_lm(8, 0.5, seed)
            assert log_probability(s) == pytest.approx(comb(8, 3) * math.log(0.5))

    def test_empty(self):
        s = sample_lm(8, 0.3, 0)
        s0 = type(s)(8, 0.3, 0, s.complex, 0)
        assert log_probability(s0) == pytest.approx(comb(8, 3) * math.log(0.7))

    def test_hand_value(self):
        Y = build_complex([(1, 2, 3), (1, 2, 4)])
        s = type(sample_lm(4, 0.25, 0))(4, 0.25, 0, Y, 2)
        assert log_probability(s) == pytest.approx(2 * math.log(0.25) + 2 * math.log(0.75))

    def test_degenerate_p(self):
        s = sample_lm(6, 0.0, 0)
        assert log_probability(s) == 0.0
        bad = type(s)(6, 0.0, 0, s.complex, 3)
        with pytest.raises(ValueError):
            log_probability(bad)
        full = sample_lm(6, 1.0, 0)
        with pytest.raises(ValueError):
            log_probability(type(full)(6, 1.0, 0, full.complex, 3))


class TestThreshold:
    def test_p_one(self, tetra):
        rep = threshold_experiment(tetra, [6], [0.0], 1.0, 5, seed=1)
        assert rep.cells[0]["probability"] == 1.0

    def test_too_small_host(self):
        rep = threshold_experiment(catalog("icosahedron"), [8], [0.0], 1.0, 3, seed=1)
        assert rep.cells[0]["probability"] == 0.0

    def test_monotone_in_p(self, tetra):
        rep = threshold_experiment(tetra, [20], [1.4, 1.1, 0.9, 0.7], 1.0, 40, seed=3)
        probs = [c["probability"] for c in rep.cells]
        assert probs == sorted(probs)
        for c in rep.cells:
            assert 0 <= c["successes"] <= c["trials"] == 40

    def test_reports_mu_tilde(self, tetra):
        rep = threshold_experiment(tetra, [8], [1.0], 1.0, 2, seed=0)
        assert rep.parameters["mu_tilde"] == "1"

    def test_errors(self, tetra):
        with pytest.raises(ValueError):
            threshold_experiment(tetra, [8], [1.0], 1.0, 0, seed=0)


class TestBetti:
    def test_full_skeleton(self):
        rep = betti_experiment(6, 1.0, 0.1, 2, seed=0, p=1.0)
        for row in rep.cells[0]["per_trial"]:
            assert row["b2_Y"] == comb(5, 2)
            assert row["f2"] == comb(6, 3)

    def test_ftwo_and_wedge(self):
        rep = betti_experiment(14, 3.0, 0.1, 30, seed=9)
        cell = rep.cells[0]
        assert cell["ftwo_violations"] == 0 and cell["wedge_violations"] == 0
        assert cell["fields"] == ["rationals"]

    def test_rows_agree_with_direct_computation(self):
        rep = betti_experiment(10, 4.0, 0.1, 5, seed=2)
        from lmcomplex.stochastic import trial_seed

        for t, row in enumerate(rep.cells[0]["per_trial"]):
            Y = sample_lm(10, 0.4, trial_seed(2, 2, t)).complex
            assert row["f2"] == Y.f
            assert row["b2_Y"] == betti_numbers(Y).b2
            assert row["k"] == len(find_tetrahedra(Y)[0])

    def test_bad_c(self):
        with pytest.raises(ValueError):
            betti_experiment(5, 6.0, 0.1, 1, seed=0)


class TestCollapse:
    def test_p0(self):
        rep = collapse_experiment(10, {"p": 0.0}, 5, seed=0)
        assert rep.cells[0]["graph_fraction"] == 1.0

    def test_p1(self):
        rep = collapse_experiment(5, {"p": 1.0}, 3, seed=0)
        assert rep.cells[0]["graph_fraction"] == 0.0
        assert rep.cells[0]["outcomes"]["closed_core"] == 3

    def test_rule(self):
        assert p_from_rule(10, {"c": 2.0, "delta": 1.0}) == pytest.approx(0.02)
        assert p_from_rule(10, {"c": 2.0}) == pytest.approx(0.2)
        assert p_from_rule(10, {"p": 0.3}) == 0.3


class TestDeterminism:
    def test_byte_identical(self, tetra):
        runs = [
            lambda: threshold_experiment(tetra, [12], [1.0, 0.8], 1.0, 10, seed=4),
            lambda: betti_experiment(10, 3.0, 0.1, 8, seed=4),
            lambda: collapse_experiment(20, {"c": 1.0}, 8, seed=4),
        ]
        for run in runs:
            a = json.dumps(run().to_dict(), sort_keys=True)
            b = json.dumps(run().to_dict(), sort_keys=True)
            assert a == b

    def test_workers_do_not_change_results(self, tetra):
        a = threshold_experiment(tetra, [12], [0.9], 1.0, 6, seed=8, workers=1)
        b = threshold_experiment(tetra, [12], [0.9], 1.0, 6, seed=8, workers=2)
        assert a.to_dict() == b.to_dict()

    def test_seed_changes_results(self):
        a = betti_experiment(12, 4.0, 0.1, 5, seed=1).to_dict()
        b = betti_experiment(12, 4.0, 0.1, 5, seed=2).to_dict()
        assert a != b


def test_tetrahedron_count_mean():
    n, c = 20, 3.0
    p = c / n
    ks = [len(find_tetrahedra(sample_lm(n, p, [7, t]).complex)[0]) for t in range(500)]
    assert sum(ks) / len(ks) <= 1.1 * comb(n, 4) * p ** 4

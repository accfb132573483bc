"""Linial-Meshulam sampling and seeded Monte Carlo experiments."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import __version__, linalg
from .complex import Complex2, full_skeleton
from .invariants import betti_numbers, mu_tilde
from .patterns import find_embedding, find_tetrahedra, prune_tetrahedra
from .surfaces import collapse

RATIONAL_FACE_LIMIT = 5000
WORKERS_ENV = "LMCOMPLEX_WORKERS"


@dataclass(frozen=True)
class LMSample:
    n: int
    p: float
    seed: int
    complex: Complex2
    f2: int


@lru_cache(maxsize=16)
def colex_triples(n: int) -> np.ndarray:
    """All triples of ``1..n`` in colex order, shape ``(C(n,3), 3)``."""
    out = np.empty((comb(n, 3), 3), dtype=np.int64)
    i = 0
    for c in range(3, n + 1):
        for b in range(2, c):
            k = b - 1
            out[i:i + k, 0] = np.arange(1, b)
            out[i:i + k, 1] = b
            out[i:i + k, 2] = c
            i += k
    out.setflags(write=False)
    return out


def face_draws(n: int, seed) -> np.ndarray:
    """One uniform draw per triple; shared across p so samples are coupled."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return rng.random(comb(n, 3))


def sample_lm(n: int, p: float, seed, draws: np.ndarray | None = None) -> LMSample:
    """Full 1-skeleton on ``1..n`` with each triple kept independently with probability ``p``."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if draws is None:
        draws = face_draws(n, seed)
    keep = colex_triples(n)[draws < p]
    S = full_skeleton(n, keep.tolist())
    return LMSample(n, float(p), seed if isinstance(seed, int) else repr(seed), S, S.f)


def log_probability(sample: LMSample) -> float:
    n, p, f2 = sample.n, sample.p, sample.f2
    total = comb(n, 3)
    if p == 0.0:
        if f2:
            raise ValueError("p = 0 but the sample has faces")
        return 0.0
    if p == 1.0:
        if f2 != total:
            raise ValueError("p = 1 but the sample misses faces")
        return 0.0
    return f2 * math.log(p) + (total - f2) * math.log1p(-p)


# -- reports -------------------------------------------------------------------

@dataclass
class ExperimentReport:
    kind: str
    parameters: dict
    cells: list[dict]
    seed: int
    version: str = __version__
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {"kind": self.kind, "version": self.version, "seed": self.seed,
             "parameters": self.parameters, "cells": self.cells}
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


def trial_seed(master: int, *key: int) -> list[int]:
    """Seed material for one trial, derived from the master seed and a key."""
    return [int(master), *map(int, key)]


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def _run_trials(fn, args_list, workers):
    if workers <= 1 or len(args_list) < 2:
        return [fn(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args_list)))


# -- threshold -----------------------------------------------------------------

def _threshold_trial(pattern: Complex2, n: int, ps: tuple[float, ...], seed_key: list[int]):
    draws = face_draws(n, seed_key)
    hits = []
    for p in ps:
        Y = sample_lm(n, p, seed_key, draws).complex
        hits.append(find_embedding(pattern, Y, "first") is not None)
    return hits


def threshold_experiment(pattern: Complex2, n_grid, alpha_grid, c: float, trials: int,
                         seed: int, workers: int | None = None) -> ExperimentReport:
    """Empirical embedding probability at ``p = c * n**-alpha`` over a grid.

    Trial ``t`` at size ``n`` uses the same uniform draws for every alpha,
    so the estimates are coupled across the alpha grid.
    """
    if pattern.f == 0:
        raise ValueError("pattern has no faces")
    if trials < 1:
        raise ValueError("trials must be positive")
    start = time.perf_counter()
    mt = mu_tilde(pattern)
    cells = []
    for ni, n in enumerate(n_grid):
        ps = tuple(min(1.0, max(0.0, c * n ** (-a))) for a in alpha_grid)
        args = [(pattern, n, ps, trial_seed(seed, 1, ni, t)) for t in range(trials)]
        results = _run_trials(_threshold_trial, args, _workers(workers))
        for ai, (a, p) in enumerate(zip(alpha_grid, ps)):
            succ = sum(r[ai] for r in results)
            cells.append({"n": n, "alpha": a, "p": p, "trials": trials, "successes": succ,
                          "probability": succ / trials})
    params = {"pattern_v": pattern.v, "pattern_f": pattern.f, "mu_tilde": f"{mt.value}",
              "n_grid": list(n_grid), "alpha_grid": list(alpha_grid), "c": c, "trials": trials}
    return ExperimentReport("threshold", params, cells, seed,
                            wall_time=time.perf_counter() - start)


# -- betti ---------------------------------------------------------------------

def _betti_trial(n: int, p: float, seed_key: list[int]) -> dict:
    Y = sample_lm(n, p, seed_key).complex
    f2 = Y.f
    field_ = linalg.RATIONALS if f2 <= RATIONAL_FACE_LIMIT else linalg.GF2
    tets, disjoint = find_tetrahedra(Y)
    bY = betti_numbers(Y, field_)
    lo, hi = f2 - comb(n - 1, 2), f2
    row = {"f2": f2, "k": len(tets), "disjoint": disjoint, "field": field_,
           "b1_Y": bY.b1, "b2_Y": bY.b2, "ftwo_holds": lo <= bY.b2 <= hi}
    if disjoint:
        bZ = betti_numbers(prune_tetrahedra(Y), field_)
        row.update(b1_Z=bZ.b1, b2_Z=bZ.b2,
                   wedge_holds=bZ.b2 == bY.b2 - len(tets) and bZ.b1 == bY.b1)
    else:
        row.update(b1_Z=None, b2_Z=None, wedge_holds=None)
    return row


def _summary(xs) -> dict:
    xs = [x for x in xs if x is not None]
    if not xs:
        return {"count": 0}
    return {"count": len(xs), "min": min(xs), "max": max(xs), "mean": sum(xs) / len(xs)}


def betti_experiment(n: int, c: float, epsilon: float, trials: int, seed: int,
                     p: float | None = None, workers: int | None = None) -> ExperimentReport:
    """Second Betti numbers of Y and of Y with one face removed per tetrahedron.

    ``p`` defaults to ``c / n``; passing it explicitly covers degenerate
    grid points such as ``p = 1``.
    """
    if p is None:
        p = c / n
    if p > 1:
        raise ValueError(f"c/n = {p} exceeds 1")
    start = time.perf_counter()
    args = [(n, p, trial_seed(seed, 2, t)) for t in range(trials)]
    rows = _run_trials(_betti_trial, args, _workers(workers))
    disjoint_rows = [r for r in rows if r["disjoint"]]
    cell = {
        "n": n, "p": p, "trials": trials,
        "ftwo_violations": sum(not r["ftwo_holds"] for r in rows),
        "disjoint_trials": len(disjoint_rows),
        "wedge_violations": sum(not r["wedge_holds"] for r in disjoint_rows),
        "b2_Z_positive_fraction": (sum(r["b2_Z"] > 0 for r in disjoint_rows) / len(disjoint_rows)
                                   if disjoint_rows else None),
        "f2": _summary(r["f2"] for r in rows),
        "k": _summary(r["k"] for r in rows),
        "b2_Y": _summary(r["b2_Y"] for r in rows),
        "b2_Z": _summary(r["b2_Z"] for r in rows),
        "b2_Z_over_n2": _summary(None if r["b2_Z"] is None else r["b2_Z"] / n ** 2 for r in rows),
        "lower_constant": (c - 3) / 8,
        "upper_bound": n ** (2 + epsilon),
        "fields": sorted({r["field"] for r in rows}),
        "per_trial": rows,
    }
    params = {"n": n, "c": c, "epsilon": epsilon, "p": p, "trials": trials}
    return ExperimentReport("betti", params, [cell], seed, wall_time=time.perf_counter() - start)


# -- collapse ------------------------------------------------------------------

def p_from_rule(n: int, rule: dict) -> float:
    """``{"p": x}`` or ``{"c": c, "delta": d}`` meaning ``c / n**(1 + d)``."""
    if "p" in rule:
        return float(rule["p"])
    return min(1.0, float(rule["c"]) / n ** (1.0 + float(rule.get("delta", 0.0))))


def _collapse_trial(n: int, p: float, seed_key: list[int]) -> str:
    return collapse(sample_lm(n, p, seed_key).complex).outcome


def collapse_experiment(n: int, p_rule: dict, trials: int, seed: int,
                        workers: int | None = None) -> ExperimentReport:
    start = time.perf_counter()
    p = p_from_rule(n, p_rule)
    args = [(n, p, trial_seed(seed, 3, t)) for t in range(trials)]
    outcomes = _run_trials(_collapse_trial, args, _workers(workers))
    counts = {k: outcomes.count(k) for k in ("graph", "closed_core", "mixed")}
    cell = {"n": n, "p": p, "trials": trials, "outcomes": counts,
            "graph_fraction": counts["graph"] / trials}
    return ExperimentReport("collapse", {"n": n, "p_rule": dict(p_rule), "trials": trials},
                            [cell], seed, wall_time=time.perf_counter() - start)

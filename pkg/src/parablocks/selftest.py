"""Exhaustive small-instance invariant suites behind the selftest command.

Each check is a top-level function so an optional process pool can run
them; results are aggregated in a fixed order either way, keeping the
output byte-identical run to run.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .cones import (
    DivisorClass,
    decompose,
    extremality_certificate,
    git_cone_membership,
    moduli_cone,
    moduli_effective_generators,
    surgery,
)
from .conformal import BlockSpec, enumerate_paths, height, rank_fusion, rank_sections
from .errors import NotEffectiveError
from .lp import Position, facet_normals
from .models import CrossingKind, classify_model, theta_class, wall_walk
from .weights import ParabolicWeight, classify_linearization, walls_containing


def _shapes(max_n, max_level):
    for level in range(1, max_level + 1):
        for n in range(0, max_n + 1):
            for shape in itertools.product(range(level + 1), repeat=n):
                yield level, shape


def check_rank_vs_paths(quick: bool):
    max_n, max_level = (4, 2) if quick else (5, 3)
    count, ok = 0, True
    for level, shape in _shapes(max_n, max_level):
        count += 1
        spec = BlockSpec(level, shape)
        if rank_fusion(spec) != len(enumerate_paths(spec)):
            ok = False
    return {"name": "rank-fusion-vs-paths", "instances": count, "passed": ok}


_SECTION_INSTANCES = [
    (1, (1, 1)),
    (2, (1, 1, 1, 1)),
    (1, (1, 1, 1, 1)),
    (2, (2, 2)),
    (2, (2, 1, 1)),
    (3, (2, 2, 1, 1)),
    (2, (2, 2, 1, 1)),
    (1, (1, 1, 1, 1, 1, 1)),
]


def check_rank_vs_sections(quick: bool):
    instances = _SECTION_INSTANCES[: 4 if quick else len(_SECTION_INSTANCES)]
    ok = True
    for level, shape in instances:
        spec = BlockSpec(level, shape)
        if rank_sections(spec) != rank_fusion(spec):
            ok = False
    return {"name": "rank-fusion-vs-sections", "instances": len(instances), "passed": ok}


def check_surgery(quick: bool):
    max_n, max_level = (4, 3) if quick else (5, 3)
    count, ok = 0, True
    for level in range(2, max_level + 1):
        for n in range(1, max_n + 1):
            for shape in itertools.combinations_with_replacement(range(level, 0, -1), n):
                for ds in enumerate_paths(BlockSpec(level, shape)):
                    h = height(ds)
                    if h <= 1:
                        continue
                    count += 1
                    try:
                        res = surgery(ds)
                    except Exception:
                        ok = False
                        continue
                    if res.ds_out.level != level - 1 or height(res.ds_out) != h - 1:
                        ok = False
                    if len(res.removed) % 2 != 0 or not res.removed:
                        ok = False
    return {"name": "surgery-postconditions", "instances": count, "passed": ok}


def check_wall_walk(quick: bool):
    w = ParabolicWeight((Fraction(1, 3),) * 5)
    res = wall_walk(w)
    ok = len(res.events) == 6
    ok = ok and res.events[0].c == Fraction(6, 5) and res.events[0].kind is CrossingKind.BLOW_UP
    ok = ok and all(e.c == 2 and e.kind is CrossingKind.BLOW_DOWN for e in res.events[1:])
    ok = ok and res.collapse is not None and res.collapse[0] == Fraction(12, 5)
    ok = ok and all(e.dim_minus + e.dim_plus == 1 for e in res.events)
    return {"name": "wall-walk-symmetric-fifth", "instances": len(res.events), "passed": ok}


def check_decompose(quick: bool):
    rng = random.Random(20260809)
    target = 12 if quick else 40
    count, ok = 0, True
    while count < target:
        n = rng.choice([5, 6])
        b = [rng.randint(0, 3) for _ in range(n)]
        if rng.random() < 0.5:
            t = rng.randint(-2, 0)
        else:
            if sum(b) % 2 != 0:
                b[0] += 1
            t = rng.randint(1, max(1, sum(b) // 2 - 1))
        d = DivisorClass(tuple(Fraction(x) for x in b), Fraction(t))
        try:
            dec = decompose(d)
        except NotEffectiveError:
            continue
        count += 1
        if dec.reconstruct() != dec.cleared:
            ok = False
    return {"name": "decompose-reconstruction", "instances": count, "passed": ok}


def check_extremality(quick: bool):
    gens = moduli_effective_generators(5)
    ok = len(gens) == 16
    for g in gens:
        try:
            cert = extremality_certificate(g)
        except Exception:
            ok = False
            continue
        ok = ok and cert.lp_extremal
    pair_cone = [
        [1 if i in pair else 0 for i in range(5)] for pair in itertools.combinations(range(5), 2)
    ]
    ok = ok and len(facet_normals(pair_cone)) == 10
    return {"name": "extremal-rays-and-facets-n5", "instances": len(gens), "passed": ok}


def check_roundtrip(quick: bool):
    rng = random.Random(20260810)
    target = 10 if quick else 25
    count, ok = 0, True
    attempts = 0
    while count < target and attempts < 50 * target:
        attempts += 1
        n = rng.choice([5, 6])
        entries = []
        for _ in range(n):
            q = rng.choice([2, 3, 4, 5, 6])
            entries.append(Fraction(rng.randint(1, q - 1), q))
        w = ParabolicWeight(tuple(entries))
        if w.total <= 2:
            continue
        th = theta_class(w)
        try:
            md = classify_model(th.divisor)
        except NotEffectiveError:
            continue
        count += 1
        if md.weight != w.entries:
            ok = False
    return {"name": "theta-model-roundtrip", "instances": count, "passed": ok}


def check_walls_coherence(quick: bool):
    rng = random.Random(20260811)
    target = 20 if quick else 60
    ok = True
    for _ in range(target):
        n = rng.choice([4, 5, 6])
        entries = tuple(Fraction(rng.randint(1, 7), 8) for _ in range(n))
        w = ParabolicWeight(entries)
        cls, _ = classify_linearization(w)
        has_m0 = any(x.m == 0 for x in walls_containing(w))
        from .weights import WeightClass

        if cls is WeightClass.GENERAL and has_m0:
            ok = False
        if cls is WeightClass.EFFECTIVE_NOT_GENERAL and not has_m0:
            ok = False
        b = tuple(Fraction(rng.randint(0, 4)) for _ in range(n))
        pos = git_cone_membership(b)
        if pos is Position.OUTSIDE and all(x > 0 for x in b) and all(2 * x < sum(b) for x in b):
            ok = False
    return {"name": "walls-and-git-cone-coherence", "instances": target, "passed": ok}


_CHECKS = [
    check_rank_vs_paths,
    check_rank_vs_sections,
    check_surgery,
    check_wall_walk,
    check_decompose,
    check_extremality,
    check_roundtrip,
    check_walls_coherence,
]


def run_selftest(quick: bool = False, workers: int = 1):
    """Run every check; aggregation order is fixed regardless of workers."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, quick) for fn in _CHECKS]
            return [f.result() for f in futures]
    return [fn(quick) for fn in _CHECKS]

"""Wall-crossing walks along a weight ray and the birational-model classifier.

Scaling a small general weight upward crosses finitely many stability
walls; each crossing is a blow-up, flip or blow-down according to the
dimensions of the two exceptional loci.  Conversely, every effective class
in the interior of the effective cone of the blown-up model is the natural
ample class of a moduli space for a readable weight; the classifier
recovers that description, reducing boundary classes by dropping points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cones import DivisorClass, _clear_denominators, moduli_cone
from .conformal import BlockSpec, rank_fusion
from .errors import DomainError, NonGeneralWeightError, NotEffectiveError, NotInteriorError
from .lp import Position
from .weights import ParabolicWeight, Wall, WeightClass, classify_linearization


class CrossingKind(enum.Enum):
    BLOW_UP = "BlowUp"
    FLIP = "Flip"
    BLOW_DOWN = "BlowDown"


@dataclass(frozen=True)
class CrossingEvent:
    """One wall met while scaling: position, wall, exceptional dimensions."""

    c: Fraction
    wall: Wall
    dim_minus: int
    dim_plus: int
    kind: CrossingKind


@dataclass(frozen=True)
class WalkResult:
    """Ordered crossings plus, when the scan range ends early, the wall
    where the moduli space empties out (negative plus-side dimension)."""

    events: tuple[CrossingEvent, ...]
    collapse: tuple[Fraction, Wall] | None = None


def wall_walk(w: ParabolicWeight) -> WalkResult:
    """All wall crossings met while scaling w upward, sorted by scale.

    Requires a general effective weight of total below 2.  Walls appear at
    scales c with c * (inside sum - outside sum) twice a positive integer;
    the scan covers 1 <= c < 1/max(a_i), where the weight stays admissible.
    The first event is always the full-set wall at c = 2/total, a blow-up
    at a point.  Crossings after the moduli space has emptied (the first
    event with negative plus-side dimension) are not reported as events;
    that wall is returned separately as ``collapse``.
    """
    cls, _ = classify_linearization(w)
    if w.total >= 2:
        raise DomainError("sum >= 2: scale the weight below total 2 first")
    if cls is WeightClass.NOT_EFFECTIVE:
        raise NotEffectiveError("weight is not effective")
    if cls is not WeightClass.GENERAL:
        raise NonGeneralWeightError("weight not general")
    n = w.n
    c_max = min(1 / a for a in w.entries)
    events = []
    for mask in range(1, 1 << n):
        inside = [i for i in range(n) if mask >> i & 1]
        diff = 2 * sum((w.entries[i] for i in inside), Fraction(0)) - w.total
        if diff <= 0:
            continue
        m = 1
        while 2 * m / diff < c_max:
            c = 2 * m / diff
            wall = Wall.canonical(inside, m, n)
            dim_minus = 2 * m + n - 2 - len(inside)
            dim_plus = n - 4 - dim_minus
            kind = (
                CrossingKind.BLOW_UP
                if dim_minus == 0
                else CrossingKind.BLOW_DOWN
                if dim_plus == 0
                else CrossingKind.FLIP
            )
            events.append(CrossingEvent(c, wall, dim_minus, dim_plus, kind))
            m += 1
    events.sort(key=lambda e: (e.c, e.wall.members, e.wall.m))
    assert all(e.wall.m >= 1 for e in events)
    collapse = None
    for idx, e in enumerate(events):
        if e.dim_plus < 0:
            collapse = (e.c, e.wall)
            events = events[:idx]
            break
    if events:
        first = events[0]
        assert first.wall.members == tuple(range(n)) and first.wall.m == 1
        assert first.c == 2 / w.total and first.kind is CrossingKind.BLOW_UP
    return WalkResult(tuple(events), collapse)


@dataclass(frozen=True)
class ThetaClass:
    """The natural ample class of a weight, with the clearing denominator.

    ``k`` clears all weight denominators and the divisor is k times the
    weight on the product side, twisted by N - k exceptional copies where
    N is half the cleared weight sum.  ``system_rank`` is the block rank of
    level k and shape k times the weight.
    """

    k: int
    divisor: DivisorClass
    system_rank: int


def theta_class(w: ParabolicWeight) -> ThetaClass:
    """Ample class attached to a weight; its sections form a block of level k."""
    k = lcm(*(a.denominator for a in w.entries))
    b = tuple(Fraction(k * a) for a in w.entries)
    big_n = sum(b, Fraction(0)) / 2
    t = big_n - k
    shape = tuple(int(x) for x in b)
    return ThetaClass(k, DivisorClass(b, t), rank_fusion(BlockSpec(k, shape)))


class ModelKind(enum.Enum):
    PARABOLIC_MODULI = "ParabolicModuli"
    GIT_QUOTIENT = "GITQuotient"
    BOUNDARY_REDUCTION = "BoundaryReduction"


@dataclass(frozen=True)
class ModelDescription:
    """A birational model named as a parabolic moduli problem.

    ``weight`` lives on the points that remain after dropping
    ``dropped_vacua`` (zero coordinates, no degree effect) and, for
    boundary classes, ``dropped_saturated`` (coordinates at the level cap,
    shifting the underlying degree by -r).  Vacua are removed before
    saturation, in that order.
    """

    kind: ModelKind
    weight: tuple[Fraction, ...]
    remaining: tuple[int, ...]
    dropped_vacua: tuple[int, ...] = ()
    dropped_saturated: tuple[int, ...] = ()
    degree_shift: int = 0
    reduction_order: str = "vacua-then-saturation"


def classify_model(d: DivisorClass) -> ModelDescription:
    """Name the birational model attached to an effective class.

    The class is cleared to an integral representative (doubled when the
    coordinate sum is odd; the model depends only on the ray).  With level
    written as half the coordinate sum minus t: positive t with all
    coordinates below the level gives the moduli space for weight b/level;
    coordinates equal to the level are dropped with a degree shift; t at
    most 0 gives the plain quotient, reported at the canonical scale
    1/sum(b).  Zero coordinates are dropped first.  Classes outside the
    effective cone raise NotEffectiveError; classes on its boundary with no
    reduction rule raise NotInteriorError.
    """
    cleared, _ = _clear_denominators(d)
    b = [int(x) for x in cleared.b]
    t = int(cleared.t)
    if any(x < 0 for x in b):
        raise NotEffectiveError("not effective: negative coordinate")
    if sum(b) % 2 != 0:
        b = [2 * x for x in b]
        t = 2 * t
    vacua = tuple(i for i, x in enumerate(b) if x == 0)
    remaining = tuple(i for i, x in enumerate(b) if x > 0)
    bs = [b[i] for i in remaining]
    m = len(bs)
    if m == 0:
        if t > 0:
            raise NotEffectiveError("not effective: negative multiple of E")
        raise NotInteriorError("not in effective cone interior: multiple of E")

    lp_position = None
    if m >= 5:
        reduced = DivisorClass(tuple(Fraction(x) for x in bs), Fraction(t))
        lp_position, _ = moduli_cone(m).membership(reduced.as_vector())
        if lp_position is Position.OUTSIDE:
            raise NotEffectiveError("not effective: outside the effective cone")

    if t > 0:
        level = sum(bs) // 2 - t
        if level < 0 or rank_fusion(BlockSpec(level, tuple(bs))) == 0:
            raise NotEffectiveError("not effective: no sections at this level")
        saturated = tuple(remaining[i] for i, x in enumerate(bs) if x == level)
        if saturated:
            keep = tuple(i for i in remaining if i not in saturated)
            weight = tuple(Fraction(b[i], level) for i in keep)
            return ModelDescription(
                ModelKind.BOUNDARY_REDUCTION,
                weight,
                keep,
                dropped_vacua=vacua,
                dropped_saturated=saturated,
                degree_shift=-len(saturated),
            )
        if lp_position is not None and lp_position is not Position.INTERIOR:
            raise AssertionError("pointwise interior test disagrees with LP membership")
        weight = tuple(Fraction(x, level) for x in bs)
        return ModelDescription(ModelKind.PARABOLIC_MODULI, weight, remaining, dropped_vacua=vacua)

    total = sum(bs)
    if any(2 * x > total for x in bs):
        raise NotEffectiveError("not effective: outside the pair cone")
    if any(2 * x == total for x in bs):
        raise NotInteriorError("not in effective cone interior: pair-cone facet")
    weight = tuple(Fraction(x, total) for x in bs)
    return ModelDescription(ModelKind.GIT_QUOTIENT, weight, remaining, dropped_vacua=vacua)

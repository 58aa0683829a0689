"""Parabolic weights as polarizations: stability, walls, chambers, Picard rank.

A weight vector doubles as a fractional polarization on the n-fold product
of lines.  Stability of a point configuration depends only on which marked
points coincide, so configurations are abstracted to set partitions of the
index set.  All indices are 0-based here; the CLI shifts to 1-based.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import NamedTuple

from .errors import DomainError, NonGeneralWeightError, WeightOnWallError

SUBSET_SCAN_WARN = 20


class Stability(enum.Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


class WeightClass(enum.Enum):
    NOT_EFFECTIVE = "NotEffective"
    EFFECTIVE_NOT_GENERAL = "EffectiveNotGeneral"
    GENERAL = "General"


@dataclass(frozen=True)
class ParabolicWeight:
    """n rationals strictly between 0 and 1, n >= 3."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(Fraction(a) for a in self.entries))
        if len(self.entries) < 3:
            raise ValueError("need at least 3 weights")
        if any(not 0 < a < 1 for a in self.entries):
            raise ValueError("weights must lie strictly between 0 and 1")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def scaled(self, c) -> "ParabolicWeight":
        return ParabolicWeight(tuple(Fraction(c) * a for a in self.entries))


@dataclass(frozen=True)
class Wall:
    """A stability wall named by an index subset and an integer offset.

    The hyperplane compares the subset sum against the complement sum plus
    2m.  A wall and its complementary description coincide, so the stored
    representative has m >= 0, and for m = 0 the side containing index 0.
    """

    members: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if not self.members:
            raise ValueError("wall subset must be nonempty")

    @classmethod
    def canonical(cls, members, m: int, n: int) -> "Wall":
        members = frozenset(members)
        if m < 0 or (m == 0 and 0 not in members):
            members = frozenset(range(n)) - members
            m = -m
        return cls(tuple(sorted(members)), m)

    def evaluate(self, w: ParabolicWeight) -> Fraction:
        """Subset sum minus complement sum minus 2m; zero on the wall."""
        inside = sum((w.entries[i] for i in self.members), Fraction(0))
        return 2 * inside - w.total - 2 * self.m


@dataclass(frozen=True)
class PointConfig:
    """Partition of range(n) into groups of coinciding points."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))
        seen = [i for b in self.blocks for i in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks must be disjoint")
        if set(seen) != set(range(len(seen))):
            raise ValueError("blocks must partition an initial index range")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @classmethod
    def distinct(cls, n: int) -> "PointConfig":
        return cls(tuple((i,) for i in range(n)))


def stability(config: PointConfig, w: ParabolicWeight) -> Stability:
    """Stable, strictly semistable or unstable for the weighted configuration.

    A coincidence block is compared against half the total weight: any block
    above kills semistability, a block exactly at half gives the strictly
    semistable case, all blocks strictly below give stability.
    """
    if config.n != w.n:
        raise ValueError("configuration size must match weight length")
    half = w.total / 2
    tight = False
    for block in config.blocks:
        s = sum((w.entries[i] for i in block), Fraction(0))
        if s > half:
            return Stability.UNSTABLE
        if s == half:
            tight = True
    return Stability.STRICTLY_SEMISTABLE if tight else Stability.STABLE


def maximal_stable_locus(w: ParabolicWeight) -> bool:
    """Every pair sum below half the total, so no pair is ever unstable."""
    half = w.total / 2
    ents = sorted(w.entries, reverse=True)
    return ents[0] + ents[1] < half


def _has_equal_split(w: ParabolicWeight) -> bool:
    half = w.total / 2
    sums = {Fraction(0)}
    for a in w.entries:
        sums |= {s + a for s in sums}
    return half in sums - {Fraction(0), w.total}


def classify_linearization(w: ParabolicWeight):
    """(weight class, maximal-stable-locus flag) for the polarization.

    Not effective when some entry reaches half the total (empty stable
    locus); general when additionally no subset splits the total weight in
    half, which is exactly when semistability implies stability.
    """
    half = w.total / 2
    flag = maximal_stable_locus(w)
    if any(a >= half for a in w.entries):
        return WeightClass.NOT_EFFECTIVE, flag
    if _has_equal_split(w):
        return WeightClass.EFFECTIVE_NOT_GENERAL, flag
    return WeightClass.GENERAL, flag


def _warn_large(n: int) -> None:
    if n > SUBSET_SCAN_WARN:
        warnings.warn(f"enumeration too large: subset scan over 2^{n} sets", stacklevel=3)


def walls_containing(w: ParabolicWeight) -> list[Wall]:
    """All walls through the weight, canonical representatives, sorted.

    Scans every subset containing index 0 (each wall has exactly one such
    description) and keeps those where the signed difference of the two
    side sums is an even integer.  Walls with m >= 1 do occur for weights
    of large total; only the m = 0 walls obstruct generality.
    """
    _warn_large(w.n)
    n = w.n
    total = w.total
    rest = list(range(1, n))
    out = []
    for mask in range(1 << (n - 1)):
        inside = {0} | {rest[i] for i in range(n - 1) if mask >> i & 1}
        diff = 2 * sum((w.entries[i] for i in inside), Fraction(0)) - total
        if diff.denominator == 1 and int(diff) % 2 == 0:
            out.append(Wall.canonical(inside, int(diff) // 2, n))
    return sorted(set(out), key=lambda wall: (wall.m, wall.members))


def same_chamber(w1: ParabolicWeight, w2: ParabolicWeight) -> bool:
    """Whether no wall separates the two weights, by exhaustive subset scan.

    Both weights must be off every wall; a weight sitting on one (this
    includes non-general weights) raises WeightOnWallError.
    """
    if w1.n != w2.n:
        raise DomainError("weights must have the same length")
    for w in (w1, w2):
        if walls_containing(w):
            raise WeightOnWallError("weight on wall")
    n = w1.n
    rest = list(range(1, n))
    for mask in range(1 << (n - 1)):
        inside = {0} | {rest[i] for i in range(n - 1) if mask >> i & 1}
        d1 = 2 * sum((w1.entries[i] for i in inside), Fraction(0)) - w1.total
        d2 = 2 * sum((w2.entries[i] for i in inside), Fraction(0)) - w2.total
        lo, hi = min(d1, d2), max(d1, d2)
        # Any even integer strictly between the two values separates them.
        if 2 * (floor(lo / 2) + 1) < hi:
            return False
    return True


class PicardData(NamedTuple):
    rank: int
    unstable_pairs: tuple[tuple[int, int], ...]


def picard_rank_git(w: ParabolicWeight) -> PicardData:
    """Picard rank n - k of the quotient, k the number of unstable pairs.

    Requires n >= 5 and an effective general weight.  The unstable pairs
    (pair sum at least half the total) form a graph without two disjoint
    edges; that impossibility is asserted since it underpins the rank count.
    """
    if w.n < 5:
        raise DomainError("n too small: Picard rank formula needs n >= 5")
    cls, _ = classify_linearization(w)
    if cls is not WeightClass.GENERAL:
        raise NonGeneralWeightError("non-general weight")
    half = w.total / 2
    pairs = tuple(
        (i, j)
        for i in range(w.n)
        for j in range(i + 1, w.n)
        if w.entries[i] + w.entries[j] >= half
    )
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            assert set(pairs[a]) & set(pairs[b]), "unstable-pair graph has disjoint edges"
    return PicardData(w.n - len(pairs), pairs)

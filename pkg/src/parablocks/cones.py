"""Divisor classes on the blown-up quotient: effective cones and decompositions.

Classes are written in coordinates (b_1, ..., b_n, t): the pullback of the
product polarization twisted by -t times the exceptional divisor E of the
one-point blow-up.  The effective cone has one generator per even subset I,
namely the indicator of I with t = |I|/2 - 1; the empty subset gives E
itself.  Heights of boxed Catalan paths drive both the surgery that lowers
a path's height and the decomposition of an effective class into cone
generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import lp
from .conformal import BlockSpec, DoubleSequence, first_path, height, rank_fusion
from .conformal import DEFAULT_MAX_WEIGHT_SUM
from .errors import (
    CertificateError,
    DomainError,
    InstanceTooLargeError,
    NonGeneralWeightError,
    NotAGeneratorError,
    NotEffectiveError,
)
from .linalg import dot, exact_rank
from .lp import Position
from .weights import ParabolicWeight, WeightClass, classify_linearization

MAX_GENERATOR_N = 16


@dataclass(frozen=True)
class DivisorClass:
    """Rational class b_1 e_1 + ... + b_n e_n - t E on the blown-up model."""

    b: tuple[Fraction, ...]
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        object.__setattr__(self, "t", Fraction(self.t))

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def total(self) -> Fraction:
        return sum(self.b, Fraction(0))

    def as_vector(self) -> tuple[Fraction, ...]:
        return self.b + (self.t,)

    def scale(self, c) -> "DivisorClass":
        c = Fraction(c)
        return DivisorClass(tuple(c * x for x in self.b), c * self.t)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.b) and self.t.denominator == 1

    @classmethod
    def exceptional(cls, n: int) -> "DivisorClass":
        return cls((Fraction(0),) * n, Fraction(-1))

    @classmethod
    def generator(cls, members, n: int) -> "DivisorClass":
        """The cone generator attached to an even index subset (0-based)."""
        members = frozenset(members)
        if len(members) % 2 != 0:
            raise ValueError("generator subsets must have even size")
        b = tuple(Fraction(1 if i in members else 0) for i in range(n))
        return cls(b, Fraction(len(members) // 2 - 1))


@dataclass(frozen=True)
class RationalCone:
    """Finitely generated cone in Q^d with exact membership and extremality."""

    generators: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(Fraction(x) for x in g) for g in self.generators)
        if any(all(x == 0 for x in g) for g in gens):
            raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0]) if self.generators else 0

    def membership(self, v):
        return lp.cone_membership(tuple(Fraction(x) for x in v), self.generators)

    def is_extremal(self, g) -> bool:
        return lp.is_extremal_ray(tuple(Fraction(x) for x in g), self.generators)

    def facets(self):
        return lp.facet_normals(self.generators)


def cone_membership_lp(v, cone: RationalCone):
    """Exact LP membership with witness; see RationalCone.membership."""
    return cone.membership(v)


def git_effective_generators(w: ParabolicWeight, require_general: bool = True):
    """Pair classes spanning the effective cone of the plain quotient.

    One class e_i + e_j (t = 0) per pair with weight sum strictly below half
    the total; pairs at or above half are contracted or unstable and do not
    contribute.  With ``require_general`` the weight must be effective and
    general, matching the hypotheses under which this list generates.
    """
    cls, _ = classify_linearization(w)
    if cls is WeightClass.NOT_EFFECTIVE:
        raise NotEffectiveError("weight is not effective")
    if require_general and cls is not WeightClass.GENERAL:
        raise NonGeneralWeightError("non-general weight")
    half = w.total / 2
    n = w.n
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if w.entries[i] + w.entries[j] < half:
                out.append(DivisorClass.generator({i, j}, n))
    return out


def git_cone_membership(b) -> Position:
    """Inequality test against the cone over the second hypersimplex.

    The cone is cut out by b_i >= 0 and 2 b_i <= sum(b); all strict gives
    Interior, any violation Outside, otherwise Boundary.  This agrees with
    LP membership in the cone spanned by the pair classes e_i + e_j.
    """
    b = tuple(Fraction(x) for x in b)
    total = sum(b, Fraction(0))
    if any(x < 0 for x in b) or any(2 * x > total for x in b):
        return Position.OUTSIDE
    if all(x > 0 for x in b) and all(2 * x < total for x in b):
        return Position.INTERIOR
    return Position.BOUNDARY


def moduli_effective_generators(n: int):
    """The 2^(n-1) extremal classes of the blown-up model, E included.

    One generator per even subset of the n indices; the empty set gives E.
    Deterministic order: by subset size, then lexicographic members.
    """
    if n < 5:
        raise DomainError("n too small: the generator list needs n >= 5")
    if n > MAX_GENERATOR_N:
        raise InstanceTooLargeError(f"instance too large: 2^{n - 1} generators")
    subsets = [()]
    for size in range(2, n + 1, 2):
        subsets.extend(itertools.combinations(range(n), size))
    return [DivisorClass.generator(s, n) for s in subsets]


def moduli_cone(n: int) -> RationalCone:
    return RationalCone(tuple(g.as_vector() for g in moduli_effective_generators(n)))


@dataclass(frozen=True)
class SurgeryResult:
    """Outcome of one height-lowering step on a boxed path."""

    removed: tuple[int, ...]
    ds_out: DoubleSequence


def surgery(ds: DoubleSequence) -> SurgeryResult:
    """Lower a boxed path's height by one, dropping the level by one.

    The shape must be sorted nonincreasing with positive entries and the
    height at least 2.  An even set T of boxes is selected, up-steps are
    removed at the odd-position choices and down-steps at the even ones, so
    the output shape is the input shape decreased by one exactly on T.

    Selection walks left to right.  From a starting box u with an up-step,
    the partner d is the first later box whose lower corner sits on the
    axis; when the stretch [u, d] contains a top-height corner the pair is
    kept (every interior lower corner is then positive, so the shifted
    stretch stays legal), otherwise the walk restarts at d without emitting.
    This also covers paths returning to the axis several times, since every
    excursion ends with a lower corner on the axis.
    """
    bad = ds.violations()
    if bad:
        raise DomainError("invalid input sequence: " + "; ".join(bad))
    shape = ds.shape
    if any(k <= 0 for k in shape):
        raise DomainError("invalid input sequence: shape entries must be positive")
    if any(shape[i] < shape[i + 1] for i in range(len(shape) - 1)):
        raise DomainError("invalid input sequence: shape must be sorted nonincreasing")
    h = height(ds)
    if h <= 1:
        raise DomainError("height <= 1: nothing to lower")

    n = ds.n
    xs, ys = list(ds.top), list(ds.bottom)
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] + xs[i] - ys[i]
    upper = [xs[i] + prefix[i] for i in range(n)]
    corner = [prefix[i] - ys[i] for i in range(n)]
    peaks = [i for i in range(n - 1) if upper[i] == h]
    assert peaks

    pairs = []
    covered_to = -1
    u = 0
    assert xs[0] > 0
    while True:
        nxt = next((p for p in peaks if p > covered_to), None)
        if nxt is None:
            break
        d = next(j for j in range(u + 1, n) if corner[j] == 0)
        if nxt <= d:
            pairs.append((u, d))
            covered_to = d
            nxt2 = next((p for p in peaks if p > d), None)
            if nxt2 is None:
                break
            u = next(j for j in range(d + 1, n) if xs[j] > 0)
        else:
            u = next(j for j in range(d, n) if xs[j] > 0)

    removed = []
    for u, d in pairs:
        assert xs[u] >= 1 and ys[d] >= 1
        xs[u] -= 1
        ys[d] -= 1
        removed.extend((u, d))
    out = DoubleSequence(tuple(xs), tuple(ys), ds.level - 1)
    out.validate()
    got_h = height(out)
    if got_h != h - 1:
        raise AssertionError(f"surgery produced height {got_h}, expected {h - 1}")
    expect = tuple(k - (1 if i in set(removed) else 0) for i, k in enumerate(shape))
    assert out.shape == expect
    return SurgeryResult(tuple(sorted(removed)), out)


@dataclass(frozen=True)
class Decomposition:
    """An effective class written over the cone generators.

    ``terms`` maps even index subsets (0-based tuples; () is E) to positive
    multiplicities.  Multiplicities are integers except for classes of odd
    coordinate sum with t <= 0, where halves can occur.  ``cleared`` is the
    integer representative actually decomposed.
    """

    cleared: DivisorClass
    scale: Fraction
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    def reconstruct(self) -> DivisorClass:
        n = self.cleared.n
        b = [Fraction(0)] * n
        t = Fraction(0)
        for members, mult in self.terms:
            g = DivisorClass.generator(members, n)
            for i in range(n):
                b[i] += mult * g.b[i]
            t += mult * g.t
        return DivisorClass(tuple(b), t)


def _clear_denominators(d: DivisorClass) -> tuple[DivisorClass, Fraction]:
    mult = lcm(*(x.denominator for x in d.as_vector()))
    return d.scale(mult), Fraction(mult)


def _greedy_pairs(counts):
    """Write an even-sum degree vector as a sum of pair indicators."""
    counts = list(counts)
    pairs = []
    while True:
        order = sorted(range(len(counts)), key=lambda i: (-counts[i], i))
        i, j = order[0], order[1]
        if counts[i] == 0:
            break
        assert counts[j] > 0, "degree vector not realizable"
        counts[i] -= 1
        counts[j] -= 1
        pairs.append((min(i, j), max(i, j)))
    return pairs


def decompose(d: DivisorClass, max_weight_sum: int = DEFAULT_MAX_WEIGHT_SUM) -> Decomposition:
    """Write an effective class as generators plus copies of E, exactly.

    The class is cleared to integer coordinates first.  Effectiveness means:
    for t > 0 a nonzero block of level N - t and shape b (N = sum(b)/2);
    for t <= 0 membership of b in the pair cone.  The algorithm strips zero
    coordinates, sorts, takes the lexicographically least path at level
    N - t, and either emits the level-one generator on the support (height
    at most 1) or runs surgery and recurses on the reduced class; negative
    intermediate t converts to copies of E immediately.  Reconstruction is
    verified before returning.
    """
    cleared, scale = _clear_denominators(d)
    b = [int(x) for x in cleared.b]
    t = int(cleared.t)
    n = cleared.n
    if any(x < 0 for x in b):
        raise NotEffectiveError("not effective: negative coordinate")
    if sum(b) > max_weight_sum:
        raise InstanceTooLargeError(f"instance too large: |b| = {sum(b)} exceeds {max_weight_sum}")

    terms: dict[tuple[int, ...], Fraction] = {}

    def emit(members, mult):
        members = tuple(sorted(members))
        if mult:
            terms[members] = terms.get(members, Fraction(0)) + Fraction(mult)

    if t > 0:
        if sum(b) % 2 != 0 or 2 * t > sum(b):
            raise NotEffectiveError("not effective: no sections at this level")
        level = sum(b) // 2 - t
        if rank_fusion(BlockSpec(level, tuple(b))) == 0:
            raise NotEffectiveError("not effective: no sections at this level")
    else:
        if git_cone_membership(tuple(Fraction(x) for x in b)) is Position.OUTSIDE:
            raise NotEffectiveError("not effective: outside the pair cone")
        emit((), -t)
        t = 0
        if sum(b) % 2 != 0:
            # No integral path exists; realize 2b by pairs and halve.
            for i, j in _greedy_pairs([2 * x for x in b]):
                emit((i, j), Fraction(1, 2))
            return _finish(cleared, scale, terms)

    while True:
        support = [i for i, x in enumerate(b) if x > 0]
        if not support:
            assert t <= 0
            emit((), -t)
            break
        level = sum(b) // 2 - t
        order = sorted(support, key=lambda i: (-b[i], i))
        sorted_shape = tuple(b[i] for i in order)
        ds = first_path(BlockSpec(level, sorted_shape), max_weight_sum)
        assert ds is not None, "effective class lost its sections during reduction"
        if height(ds) <= 1:
            assert all(b[i] == 1 for i in support)
            emit(tuple(support), 1)
            emit((), len(support) // 2 - 1 - t)
            break
        res = surgery(ds)
        removed = tuple(sorted(order[i] for i in res.removed))
        emit(removed, 1)
        for i in removed:
            b[i] -= 1
        t = t + 1 - len(removed) // 2
        if t < 0:
            emit((), -t)
            t = 0
    return _finish(cleared, scale, terms)


def _finish(cleared, scale, terms):
    ordered = tuple(sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0])))
    out = Decomposition(cleared, scale, ordered)
    if out.reconstruct() != cleared:
        raise AssertionError("decomposition failed to reconstruct the class")
    return out


@dataclass(frozen=True)
class ExtremalityCertificate:
    """Functionals plus an LP check certifying one generator is extremal.

    ``functionals`` are n vectors in Q^(n+1), linearly independent, each
    vanishing on the generator and nonnegative on every generator; for E
    the list is empty and the LP result alone certifies extremality.
    """

    generator: DivisorClass
    members: tuple[int, ...]
    functionals: tuple[tuple[Fraction, ...], ...]
    lp_extremal: bool


def _identify_generator(g: DivisorClass):
    if g == DivisorClass.exceptional(g.n):
        return ()
    members = tuple(i for i, x in enumerate(g.b) if x != 0)
    if DivisorClass.generator(members, g.n) != g:
        raise NotAGeneratorError("not a generator")
    return members


def extremality_certificate(g: DivisorClass) -> ExtremalityCertificate:
    """Certify that a listed generator spans an extremal ray of the cone.

    For a pair (size-2 subset) the two distinguished functionals subtract
    the chosen coordinate from the sum of the others and t; the printed
    form summing all coordinates fails to vanish on its own generator, so
    the corrected form is used here.  For larger subsets the functionals
    come from near-full subsets of the generator's support.  Everything is
    verified exactly before returning, and an independent LP test confirms
    the ray is not in the cone of the remaining generators.
    """
    n = g.n
    members = _identify_generator(g)
    gens = moduli_effective_generators(n)
    cone = moduli_cone(n)
    lp_ok = cone.is_extremal(g.as_vector())
    if not lp_ok:
        raise CertificateError("LP says the generator is not extremal")
    functionals: list[tuple[Fraction, ...]] = []
    if members:
        size = len(members)
        if size == 2:
            for k in members:
                row = [Fraction(1)] * n + [Fraction(-1)]
                row[k] = Fraction(-1)
                functionals.append(tuple(row))
        else:
            head = members[:-1]
            for k in range(size - 1):
                sub = [m for idx, m in enumerate(head) if idx != k]
                functionals.append(_support_functional(sub, members, n))
            functionals.append(_support_functional(list(head[: size - 3]) + [members[-1]], members, n))
        for k in range(n):
            if k not in members:
                row = [Fraction(0)] * (n + 1)
                row[k] = Fraction(1)
                functionals.append(tuple(row))
        gv = g.as_vector()
        for f in functionals:
            if dot(f, gv) != 0:
                raise CertificateError("functional does not vanish on its generator")
            for other in gens:
                if dot(f, other.as_vector()) < 0:
                    raise CertificateError("functional is negative on a generator")
        if exact_rank(functionals) != n:
            raise CertificateError("functionals are not independent")
    return ExtremalityCertificate(g, members, tuple(functionals), lp_ok)


def _support_functional(inside, members, n):
    # Coefficient 1 on `inside` and on everything outside `members`, -2 on t.
    row = [Fraction(1)] * n + [Fraction(-2)]
    for m in members:
        row[m] = Fraction(1 if m in inside else 0)
    return tuple(row)

"""Exact rational linear programming and polyhedral primitives.

Everything here works over ``fractions.Fraction``; no floating point is used
anywhere.  The simplex solver uses Bland's rule, so it terminates on every
input.  The double description routine enumerates extreme rays of a pointed
cone given by inequalities; composing it with polarity yields facet normals
of a cone given by generators.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .errors import DimensionMismatchError
from .linalg import dot, exact_rank, primitive, solve_square

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class Position(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


def _pivot(tab, basis, leave, enter):
    piv = tab[leave][enter]
    tab[leave] = [x / piv for x in tab[leave]]
    for i in range(len(tab)):
        if i != leave and tab[i][enter] != 0:
            f = tab[i][enter]
            tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
    basis[leave] = enter


def _run_simplex(tab, basis, cost):
    """Minimize cost over the current tableau; Bland's rule, in place."""
    ncols = len(tab[0]) - 1
    red = [Fraction(x) for x in cost]
    for i, bi in enumerate(basis):
        if red[bi] != 0:
            f = red[bi]
            red = [r - f * t for r, t in zip(red, tab[i])]
    while True:
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            return OPTIMAL
        ratio, leave = None, None
        for i in range(len(tab)):
            if tab[i][enter] > 0:
                r = tab[i][-1] / tab[i][enter]
                if ratio is None or r < ratio or (r == ratio and basis[i] < basis[leave]):
                    ratio, leave = r, i
        if leave is None:
            return UNBOUNDED
        _pivot(tab, basis, leave, enter)
        f = red[enter]
        if f != 0:
            red = [r - f * t for r, t in zip(red, tab[leave])]


def solve_lp(a_rows, b, c):
    """Minimize c.x subject to A x = b, x >= 0, all data rational.

    Returns ``(status, x, value, farkas)``.  ``farkas`` is set only when
    INFEASIBLE: a vector y with y.b > 0 and y.A <= 0 componentwise, stated
    for the original (unflipped) rows.
    """
    m, n = len(a_rows), len(c)
    rows = [[Fraction(x) for x in row] for row in a_rows]
    rhs = [Fraction(x) for x in b]
    signs = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            signs[i] = -1

    tab = [rows[i] + [Fraction(int(j == i)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    status = _run_simplex(tab, basis, phase1)
    assert status == OPTIMAL  # phase 1 is bounded below by 0
    if sum(tab[i][-1] for i in range(m) if basis[i] >= n) > 0:
        # Farkas certificate from the phase-1 dual: solve B^T y = c_B.
        cols = []
        for i in range(m):
            j = basis[i]
            col = [rows[r][j] for r in range(m)] if j < n else [Fraction(int(r == j - n)) for r in range(m)]
            cols.append(col)
        cb = [phase1[basis[i]] for i in range(m)]
        y = solve_square(cols, cb)
        y = tuple(v * s for v, s in zip(y, signs))
        return INFEASIBLE, None, None, y

    # Remove artificials: pivot basic ones to structural columns, drop
    # redundant rows, then cut the artificial columns off the tableau.
    drop = []
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if tab[i][j] != 0), None)
            if enter is None:
                drop.append(i)
            else:
                _pivot(tab, basis, i, enter)
    tab = [row[:n] + row[-1:] for i, row in enumerate(tab) if i not in drop]
    basis = [bi for i, bi in enumerate(basis) if i not in drop]

    status = _run_simplex(tab, basis, list(c))
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = tab[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return OPTIMAL, tuple(x), value, None


def cone_combination(v, generators):
    """Nonnegative rational lambda with sum(lambda_i g_i) = v, or None."""
    d = len(v)
    if any(len(g) != d for g in generators):
        raise DimensionMismatchError("dimension mismatch")
    rows = [[g[k] for g in generators] for k in range(d)]
    status, x, _, _ = solve_lp(rows, list(v), [Fraction(0)] * len(generators))
    return x if status == OPTIMAL else None


def cone_membership(v, generators):
    """Classify v against cone(generators) and return an exact witness.

    Returns ``(position, witness)``.  Outside: witness is a separating
    functional phi with phi.v < 0 and phi.g >= 0 for every generator.
    Boundary/Interior: witness is a nonnegative combination realizing v.
    Interior is decided by pushing v against the generator sum, so for a
    lower-dimensional cone it means interior relative to the span.
    """
    d = len(v)
    if any(len(g) != d for g in generators):
        raise DimensionMismatchError("dimension mismatch")
    if not generators:
        if any(x != 0 for x in v):
            return Position.OUTSIDE, tuple(-Fraction(x) for x in v)
        return Position.BOUNDARY, ()
    rows = [[g[k] for g in generators] for k in range(d)]
    status, lam, _, y = solve_lp(rows, list(v), [Fraction(0)] * len(generators))
    if status != OPTIMAL:
        phi = tuple(-u for u in y)
        assert dot(phi, v) < 0 and all(dot(phi, g) >= 0 for g in generators)
        return Position.OUTSIDE, phi
    s = tuple(sum(g[k] for g in generators) for k in range(d))
    # maximize eps subject to  G lam + eps s = v, lam >= 0, 0 <= eps <= 1
    # (the cap keeps the LP bounded; only the sign of the optimum matters).
    rows_eps = [[g[k] for g in generators] + [s[k], Fraction(0)] for k in range(d)]
    rows_eps.append([Fraction(0)] * len(generators) + [Fraction(1), Fraction(1)])
    rhs = list(v) + [Fraction(1)]
    cost = [Fraction(0)] * len(generators) + [Fraction(-1), Fraction(0)]
    status2, _, val2, _ = solve_lp(rows_eps, rhs, cost)
    assert status2 == OPTIMAL
    return (Position.INTERIOR if -val2 > 0 else Position.BOUNDARY), lam


def is_extremal_ray(g, generators):
    """Exact LP test: g spans an extremal ray of the pointed cone it generates."""
    gp = primitive(g)
    others = [h for h in generators if primitive(h) != gp]
    if len(others) == len(generators):
        raise ValueError("g is not among the generators")
    pos, _ = cone_membership(g, others)
    return pos is Position.OUTSIDE


def extreme_rays(constraint_rows):
    """Extreme rays of the pointed cone {y : r.y >= 0 for r in rows}.

    The constraint matrix must have full column rank (pointedness); raises
    ValueError otherwise.  Rays come back as primitive integer tuples in a
    deterministic order.
    """
    rows = [tuple(Fraction(x) for x in r) for r in constraint_rows]
    if not rows:
        raise ValueError("empty constraint system")
    d = len(rows[0])
    if exact_rank(rows) < d:
        raise ValueError("cone is not pointed")

    chosen, idx_chosen = [], []
    for i, r in enumerate(rows):
        if exact_rank(chosen + [r]) > len(chosen):
            chosen.append(r)
            idx_chosen.append(i)
        if len(chosen) == d:
            break
    rays = []
    for j in range(d):
        e = [Fraction(0)] * d
        e[j] = Fraction(1)
        rays.append(primitive(solve_square([list(r) for r in chosen], e)))
    processed = list(idx_chosen)

    for i, row in enumerate(rows):
        if i in idx_chosen:
            continue
        vals = {r: dot(row, r) for r in rays}
        acts = {r: frozenset(k for k in processed if dot(rows[k], r) == 0) for r in rays}
        keep = [r for r in rays if vals[r] >= 0]
        new = []
        for rp in rays:
            if vals[rp] <= 0:
                continue
            for rn in rays:
                if vals[rn] >= 0:
                    continue
                common = acts[rp] & acts[rn]
                if any(r3 is not rp and r3 is not rn and common <= acts[r3] for r3 in rays):
                    continue
                combo = tuple(vals[rp] * bb - vals[rn] * aa for aa, bb in zip(rp, rn))
                new.append(primitive(combo))
        processed.append(i)
        seen, merged = set(), []
        for r in keep + new:
            if r not in seen:
                seen.add(r)
                merged.append(r)
        rays = merged
    return sorted(rays)


def facet_normals(generators):
    """Facet inequalities of the full-dimensional cone spanned by generators.

    Each returned primitive integer vector u defines one facet; the cone is
    exactly {x : u.x >= 0 for every returned u}.  Raises ValueError when the
    generators do not span the ambient space.
    """
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    if not gens:
        raise ValueError("no generators")
    d = len(gens[0])
    if exact_rank(gens) < d:
        raise ValueError("cone is not full dimensional")
    return extreme_rays(gens)


def _normalize_ineq(coeffs, r):
    nz = next((c for c in coeffs if c != 0), None)
    if nz is None:
        return None, r
    prim = primitive(coeffs)
    i0 = next(i for i, c in enumerate(coeffs) if c != 0)
    scale = Fraction(coeffs[i0]) / prim[i0]
    return prim, Fraction(r) / scale


def fm_feasible(ineqs, nvars):
    """Fourier-Motzkin feasibility for {x : c.x >= r for (c, r) in ineqs}.

    An independent cross check for small dimensions; intermediate rows can
    grow quickly, so keep nvars small.
    """
    system = [(tuple(Fraction(x) for x in coeffs), Fraction(r)) for coeffs, r in ineqs]
    for var in range(nvars):
        pos = [(c, r) for c, r in system if c[var] > 0]
        neg = [(c, r) for c, r in system if c[var] < 0]
        zero = [(c, r) for c, r in system if c[var] == 0]
        new = list(zero)
        for cp, rp in pos:
            for cn, rn in neg:
                a, bcoef = -cn[var], cp[var]
                coeffs = tuple(a * x + bcoef * y for x, y in zip(cp, cn))
                new.append((coeffs, a * rp + bcoef * rn))
        best = {}
        consts = []
        for coeffs, r in new:
            prim, rn = _normalize_ineq(coeffs, r)
            if prim is None:
                consts.append((coeffs, r))
            elif prim not in best or rn > best[prim]:
                best[prim] = rn
        system = [(tuple(Fraction(c) for c in prim), rn) for prim, rn in best.items()] + consts
    return all(r <= 0 for _, r in system)

"""Exact rational linear feasibility by Fourier-Motzkin elimination.

Everything here works over :class:`fractions.Fraction`; the systems that show
up in this package have at most a handful of variables, where elimination is
both simpler and more predictable than a simplex code.

A constraint ``(a, b, strict)`` means ``a . x <= b`` (or ``< b`` when strict).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Iterable, Iterator, Optional, Sequence

Constraint = tuple[tuple[Fraction, ...], Fraction, bool]


def constraint(a: Iterable, b, strict: bool = False) -> Constraint:
    return tuple(Fraction(x) for x in a), Fraction(b), strict


def le(a, b) -> Constraint:
    return constraint(a, b, False)


def lt(a, b) -> Constraint:
    return constraint(a, b, True)


def ge(a, b) -> Constraint:
    return constraint([-x for x in a], -Fraction(b), False)


def gt(a, b) -> Constraint:
    return constraint([-x for x in a], -Fraction(b), True)


def eq(a, b) -> list[Constraint]:
    return [le(a, b), ge(a, b)]


def _normalize(c: Constraint) -> Constraint:
    a, b, strict = c
    scale = next((abs(x) for x in a if x != 0), None)
    if scale is None:
        return a, b, strict
    return tuple(x / scale for x in a), b / scale, strict


def _trivially_ok(c: Constraint) -> Optional[bool]:
    """For a constraint with zero left side, whether it holds; else None."""
    a, b, strict = c
    if any(x != 0 for x in a):
        return None
    return b > 0 if strict else b >= 0


def _dedupe(cons: Iterable[Constraint]) -> list[Constraint]:
    # Keep the tightest constraint per normalized direction.
    best: dict[tuple[Fraction, ...], tuple[Fraction, bool]] = {}
    order = []
    for c in cons:
        a, b, strict = _normalize(c)
        if a not in best:
            best[a] = (b, strict)
            order.append(a)
            continue
        ob, ostrict = best[a]
        if b < ob or (b == ob and strict and not ostrict):
            best[a] = (b, strict)
    return [(a, best[a][0], best[a][1]) for a in order]


def _eliminate(cons: list[Constraint], k: int) -> Optional[list[Constraint]]:
    """Eliminate variable ``k``; returns None once a contradiction shows up."""
    pos, neg, rest = [], [], []
    for c in cons:
        coef = c[0][k]
        (pos if coef > 0 else neg if coef < 0 else rest).append(c)
    out = list(rest)
    for ap, bp, sp in pos:
        for an, bn, sn in neg:
            lp, ln = -an[k], ap[k]
            a = tuple(lp * x + ln * y for x, y in zip(ap, an))
            out.append((a, lp * bp + ln * bn, sp or sn))
    kept = []
    for c in out:
        ok = _trivially_ok(c)
        if ok is False:
            return None
        if ok is None:
            kept.append(c)
    return _dedupe(kept)


def _check_dims(cons: Sequence[Constraint], n: int) -> None:
    for a, _, _ in cons:
        if len(a) != n:
            raise ValueError(f"constraint of length {len(a)} in a {n}-variable system")


def find_point(cons: Sequence[Constraint], n: int) -> Optional[tuple[Fraction, ...]]:
    """Return a rational point satisfying every constraint, or None."""
    _check_dims(cons, n)
    start = []
    for c in cons:
        ok = _trivially_ok(c)
        if ok is False:
            return None
        if ok is None:
            start.append(c)
    systems = [_dedupe(start)]
    for k in range(n - 1, -1, -1):
        nxt = _eliminate(systems[-1], k)
        if nxt is None:
            return None
        systems.append(nxt)
    # systems[n - k] involves variables 0..k-1 only.
    x: list[Fraction] = []
    for k in range(n):
        system = systems[n - 1 - k]
        lo = hi = None
        lo_strict = hi_strict = False
        for a, b, strict in system:
            coef = a[k]
            if coef == 0:
                continue
            bound = (b - sum(ai * xi for ai, xi in zip(a, x))) / coef
            if coef > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
            else:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
        x.append(_pick(lo, lo_strict, hi, hi_strict))
    return tuple(x)


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(floor(hi) - 1)
    if hi is None:
        return Fraction(ceil(lo) + 1)
    if lo == hi:
        return lo
    # prefer an integer strictly inside, else the midpoint
    cand = Fraction(floor(lo) + 1)
    if cand < hi:
        return cand
    return (lo + hi) / 2


def feasible(cons: Sequence[Constraint], n: int) -> bool:
    return find_point(cons, n) is not None


def satisfies(x: Sequence, cons: Iterable[Constraint]) -> bool:
    for a, b, strict in cons:
        s = sum(Fraction(ai) * xi for ai, xi in zip(a, x))
        if (s >= b) if strict else (s > b):
            return False
    return True


def interior_point(cons: Sequence[Constraint], n: int) -> Optional[tuple[Fraction, ...]]:
    """A point where every non-degenerate inequality holds strictly."""
    strict = []
    for a, b, _ in cons:
        if all(x == 0 for x in a):
            if b < 0:
                return None
            continue
        strict.append((a, b, True))
    return find_point(strict, n)


def recession_direction(cons: Sequence[Constraint], n: int) -> Optional[tuple[Fraction, ...]]:
    """A nonzero ``d`` with ``a . d <= 0`` for every constraint, if one exists."""
    homog = [(a, Fraction(0), False) for a, _, _ in cons]
    for i, sign in product(range(n), (1, -1)):
        unit = tuple(Fraction(-sign) if j == i else Fraction(0) for j in range(n))
        d = find_point(homog + [(unit, Fraction(-1), False)], n)
        if d is not None:
            return d
    return None


def is_bounded(cons: Sequence[Constraint], n: int) -> bool:
    return recession_direction(cons, n) is None


def coordinate_bounds(cons: Sequence[Constraint], n: int, k: int):
    """Exact (min, max) of ``x_k`` over a nonempty bounded system."""
    _check_dims(cons, n)
    system = _dedupe([c for c in cons if _trivially_ok(c) is None])
    for j in range(n - 1, -1, -1):
        if j == k:
            continue
        system = _eliminate(system, j)
        if system is None:
            return None
    lo = hi = None
    for a, b, _ in system:
        coef = a[k]
        bound = b / coef
        if coef > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    return lo, hi


def integer_points(cons: Sequence[Constraint], n: int) -> Iterator[tuple[int, ...]]:
    """Enumerate the lattice points of a bounded system, coordinate by coordinate."""
    _check_dims(cons, n)

    def rec(prefix: tuple[int, ...], system: list[Constraint]) -> Iterator[tuple[int, ...]]:
        k = len(prefix)
        if k == n:
            if satisfies(prefix, cons):
                yield prefix
            return
        bounds = coordinate_bounds(system, n - k, 0)
        if bounds is None:
            return
        lo, hi = bounds
        if lo is None or hi is None:
            raise ValueError("integer_points needs a bounded system")
        for v in range(ceil(lo), floor(hi) + 1):
            sub = [(a[1:], b - a[0] * v, s) for a, b, s in system]
            yield from rec(prefix + (v,), sub)

    if find_point(cons, n) is None:
        return
    if n == 0:
        yield ()
        return
    yield from rec((), list(cons))


def affine_dimension(cons: Sequence[Constraint], n: int) -> int:
    """Dimension of the polyhedron; -1 when empty."""
    if find_point(cons, n) is None:
        return -1
    implicit = []
    for i, (a, b, _) in enumerate(cons):
        if all(x == 0 for x in a):
            continue
        others = [c for j, c in enumerate(cons) if j != i]
        if find_point(others + [(a, b, True)], n) is None:
            implicit.append(a)
    return n - rank(implicit)


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Solve a square system exactly; None if singular."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(m[i][n] / m[i][i] for i in range(n))

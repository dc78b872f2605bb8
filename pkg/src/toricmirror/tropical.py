"""Tropical amoeba of the Landau-Ginzburg mirror at the tropical limit.

For weights ``nu`` on a finite set of exponents, the complement of the
tropical amoeba is cut into regions ``C_alpha`` on which the affine function
``u -> <u, alpha> - nu(alpha)`` dominates all others.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from . import _linear as lin
from .lattice import Fan, IntVector, polytope_from_support


@dataclass(frozen=True)
class TropicalPolynomial:
    terms: tuple[tuple[IntVector, int], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a tropical polynomial needs at least one term")
        exps = [a for a, _ in self.terms]
        if len(set(exps)) != len(exps):
            raise ValueError("term exponents must be distinct")
        n = len(exps[0])
        if any(len(a) != n for a in exps):
            raise ValueError("all exponents must have the same length")
        zero = tuple(0 for _ in range(n))
        if (zero, 0) not in self.terms:
            raise ValueError("the constant term (0, 0) must be present")

    @classmethod
    def from_dict(cls, terms: dict) -> "TropicalPolynomial":
        return cls(tuple((tuple(int(x) for x in a), int(nu)) for a, nu in terms.items()))

    @property
    def dim(self) -> int:
        return len(self.terms[0][0])

    def value(self, u: Sequence) -> Fraction:
        return max(sum(Fraction(x) * a for x, a in zip(u, alpha)) - nu
                   for alpha, nu in self.terms)

    def dominant(self, u: Sequence) -> list[IntVector]:
        top = self.value(u)
        return [alpha for alpha, nu in self.terms
                if sum(Fraction(x) * a for x, a in zip(u, alpha)) - nu == top]


def mirror_polynomial(fan: Fan, psi: Sequence[int]) -> TropicalPolynomial:
    """Terms at the origin (weight 0) and at every ray (weight ``psi``)."""
    zero = tuple(0 for _ in range(fan.dim))
    terms = [(zero, 0)] + [(r, int(c)) for r, c in zip(fan.rays, psi)]
    return TropicalPolynomial(tuple(terms))


@dataclass(frozen=True)
class Region:
    alpha: IntVector
    constraints: tuple[lin.Constraint, ...]
    full_dim: bool
    bounded: bool
    interior_point: Optional[tuple[Fraction, ...]] = None

    def contains(self, u: Sequence) -> bool:
        return lin.satisfies(u, self.constraints)

    def inequalities(self) -> list[tuple[IntVector, int]]:
        """As ``(normal, bound)`` pairs meaning ``<u, normal> <= bound``."""
        return [(tuple(int(x) for x in a), int(b)) for a, b, _ in self.constraints]


def _region_constraints(W: TropicalPolynomial, alpha: IntVector, nu_a: int):
    # <u, alpha - beta> >= nu(alpha) - nu(beta)  <=>  <u, beta - alpha> <= nu(beta) - nu(alpha)
    return tuple(lin.le([b - a for a, b in zip(alpha, beta)], nu_b - nu_a)
                 for beta, nu_b in W.terms if beta != alpha)


def regions(W: TropicalPolynomial) -> list[Region]:
    n = W.dim
    out = []
    for alpha, nu in W.terms:
        cons = _region_constraints(W, alpha, nu)
        interior = lin.interior_point(list(cons), n)
        full = interior is not None
        bounded = full and lin.is_bounded(list(cons), n)
        out.append(Region(alpha, cons, full, bounded, interior))
    return out


def bounded_regions(W: TropicalPolynomial) -> list[Region]:
    return [r for r in regions(W) if r.full_dim and r.bounded]


def is_maximal_subdivision(W: TropicalPolynomial) -> bool:
    return all(r.full_dim for r in regions(W))


def _normalized(cons) -> list[tuple[tuple[int, ...], int]]:
    out = set()
    for a, b, _ in cons:
        if all(x == 0 for x in a):
            continue
        den = 1
        for x in list(a) + [b]:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in a] + [int(b * den)]
        g = 0
        for x in ints:
            g = gcd(g, x)
        out.add((tuple(x // g for x in ints[:-1]), ints[-1] // g))
    return sorted(out)


@dataclass
class FanoReport:
    bounded: list[Region]
    extra_bounded: bool
    c0_equals_polytope: bool
    maximal: bool
    warnings: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.extra_bounded:
            return "extra bounded region (non-Fano phenomenon)"
        return "Fano-consistent"


def fano_diagnostic(fan: Fan, psi: Sequence[int]) -> FanoReport:
    W = mirror_polynomial(fan, psi)
    regs = regions(W)
    zero = tuple(0 for _ in range(fan.dim))
    c0 = next(r for r in regs if r.alpha == zero)
    q = polytope_from_support(fan, psi)
    same = _normalized(c0.constraints) == _normalized(q.constraints())
    bounded = [r for r in regs if r.full_dim and r.bounded]
    extra = any(r.alpha != zero for r in bounded)
    maximal = all(r.full_dim for r in regs)
    notes = []
    if not maximal:
        missing = [r.alpha for r in regs if not r.full_dim]
        notes.append(f"weights do not induce a maximal subdivision; no region for {missing}")
        warnings.warn(notes[-1], stacklevel=2)
    return FanoReport(bounded, extra, same, maximal, notes)


@dataclass(frozen=True)
class Skeleton:
    """Corner locus of a planar tropical polynomial.

    ``edges`` are bounded segments, ``rays`` are ``(start, direction)`` pairs and
    ``lines`` are ``(point, direction)`` pairs; each piece records the two
    exponents whose regions it separates.
    """

    vertices: tuple[tuple[Fraction, Fraction], ...]
    edges: tuple[tuple[tuple, tuple, tuple[IntVector, IntVector]], ...]
    rays: tuple[tuple[tuple, tuple, tuple[IntVector, IntVector]], ...]
    lines: tuple[tuple[tuple, tuple, tuple[IntVector, IntVector]], ...] = ()


def amoeba_skeleton_2d(W: TropicalPolynomial) -> Skeleton:
    if W.dim != 2:
        raise ValueError("amoeba_skeleton_2d needs a planar polynomial")
    nu = dict(W.terms)
    verts: list[tuple[Fraction, Fraction]] = []
    edges, rays, lines = [], [], []
    for (a, na), (b, nb) in combinations(W.terms, 2):
        diff = (a[0] - b[0], a[1] - b[1])
        # equality <u, a-b> = na - nb; parametrize u = p + t * d
        direction = (-diff[1], diff[0])
        p = _point_on_line(diff, na - nb)
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        empty = False
        for c, nc in W.terms:
            if c in (a, b):
                continue
            # <u, c - a> <= nc - na  along the line
            g = (c[0] - a[0], c[1] - a[1])
            slope = g[0] * direction[0] + g[1] * direction[1]
            rhs = nc - na - (g[0] * p[0] + g[1] * p[1])
            if slope == 0:
                if rhs < 0:
                    empty = True
                    break
                continue
            bound = Fraction(rhs) / slope
            if slope > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if empty or (lo is not None and hi is not None and lo >= hi):
            continue
        label = (a, b)

        def at(t):
            return (p[0] + t * direction[0], p[1] + t * direction[1])

        if lo is not None and hi is not None:
            s, e = at(lo), at(hi)
            edges.append((s, e, label))
            verts += [s, e]
        elif lo is not None:
            rays.append((at(lo), direction, label))
            verts.append(at(lo))
        elif hi is not None:
            rays.append((at(hi), (-direction[0], -direction[1]), label))
            verts.append(at(hi))
        else:
            lines.append((p, direction, label))
    uniq = sorted(set(verts))
    return Skeleton(tuple(uniq), tuple(edges), tuple(rays), tuple(lines))


def _point_on_line(normal: tuple[int, int], rhs: int) -> tuple[Fraction, Fraction]:
    if normal[0] != 0:
        return (Fraction(rhs, normal[0]), Fraction(0))
    return (Fraction(0), Fraction(rhs, normal[1]))


def regions_to_json(W: TropicalPolynomial) -> dict:
    return {
        "schema": 1,
        "terms": [{"alpha": list(a), "nu": nu} for a, nu in W.terms],
        "regions": [
            {
                "alpha": list(r.alpha),
                "inequalities": [{"normal": list(n), "bound": b} for n, b in r.inequalities()],
                "full_dim": r.full_dim,
                "bounded": r.bounded,
            }
            for r in regions(W)
        ],
    }

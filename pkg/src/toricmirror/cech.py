"""Cech model of the DG category of line bundles on a smooth toric variety.

A generator of the weight-``u`` summand of ``Hom(L0, L1)`` is a strictly
nested chain of faces of ``Q`` (increasing face ids). It survives unless every
face of the chain lies in the positive boundary of ``H(L1 - L0, u)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Sequence

from . import _linear as lin
from .chains import CohomologyResult, FreeComplex, cohomology
from .lattice import BoundaryPattern, ToricVariety, bundle_difference, h_function

Chain = tuple[int, ...]
Bundle = tuple[int, ...]


class InconsistencyError(RuntimeError):
    """A pattern with nonzero cohomology occupies an unbounded chamber."""


class CompositionError(ValueError):
    pass


class CechModel:
    """Chain data of ``Q``'s face poset, shared by all bundles on one variety."""

    def __init__(self, X: ToricVariety):
        self.X = X
        self.poset = X.poset
        n = len(self.poset)
        self.above = [[g for g in range(n) if g != f and self.poset.leq(f, g)] for f in range(n)]
        self.chains: list[list[Chain]] = self._enumerate()
        self._insert_cache: dict[Chain, list[tuple[Chain, int]]] = {}
        self._complex_cache: dict[frozenset[int], FreeComplex] = {}
        self._cohom_cache: dict[frozenset[int], CohomologyResult] = {}

    def _enumerate(self) -> list[list[Chain]]:
        out: list[list[Chain]] = []

        def grow(chain: Chain):
            k = len(chain) - 1
            while len(out) <= k:
                out.append([])
            out[k].append(chain)
            for g in self.above[chain[-1]]:
                grow(chain + (g,))

        for f in range(len(self.poset)):
            grow((f,))
        return [sorted(level) for level in out]

    def in_plus(self, face: int, positive: frozenset[int]) -> bool:
        return bool(self.poset.faces[face].active & positive)

    def admissible(self, chain: Chain, positive: frozenset[int]) -> bool:
        return not all(self.in_plus(f, positive) for f in chain)

    def insertions(self, chain: Chain) -> list[tuple[Chain, int]]:
        """Chains with one more face, with the coboundary sign ``(-1)^i``."""
        hit = self._insert_cache.get(chain)
        if hit is not None:
            return hit
        out = []
        leq = self.poset.leq
        for i in range(len(chain) + 1):
            lo = chain[i - 1] if i > 0 else None
            hi = chain[i] if i < len(chain) else None
            for f in range(len(self.poset)):
                if f in chain:
                    continue
                if lo is not None and not leq(lo, f):
                    continue
                if hi is not None and not leq(f, hi):
                    continue
                out.append((chain[:i] + (f,) + chain[i:], -1 if i % 2 else 1))
        self._insert_cache[chain] = out
        return out

    def complex(self, positive: frozenset[int]) -> FreeComplex:
        hit = self._complex_cache.get(positive)
        if hit is not None:
            return hit
        basis = [[c for c in level if self.admissible(c, positive)] for level in self.chains]
        index = [{c: i for i, c in enumerate(level)} for level in basis]
        ds = []
        for k, level in enumerate(basis):
            m = {}
            if k + 1 < len(basis):
                for j, c in enumerate(level):
                    for new, s in self.insertions(c):
                        i = index[k + 1].get(new)
                        if i is not None:
                            m[(i, j)] = s
            ds.append(m)
        cx = FreeComplex.build(0, basis, ds)
        self._complex_cache[positive] = cx
        return cx

    def cohomology(self, positive: frozenset[int]) -> CohomologyResult:
        hit = self._cohom_cache.get(positive)
        if hit is None:
            hit = cohomology(self.complex(positive))
            self._cohom_cache[positive] = hit
        return hit


_MODELS: dict[int, tuple[ToricVariety, CechModel]] = {}


def model(X: ToricVariety) -> CechModel:
    """Cached per variety object."""
    hit = _MODELS.get(id(X))
    if hit is None or hit[0] is not X:
        hit = (X, CechModel(X))
        _MODELS[id(X)] = hit
    return hit[1]


def pattern(X: ToricVariety, L0: Sequence[int], L1: Sequence[int], u: Sequence[int]) -> BoundaryPattern:
    return h_function(X.fan, bundle_difference(L1, L0), u)


def cech_complex(X: ToricVariety, L0: Sequence[int], L1: Sequence[int],
                 u: Sequence[int]) -> FreeComplex:
    return model(X).complex(pattern(X, L0, L1, u).positive)


# --- cochains ------------------------------------------------------------------

@dataclass(frozen=True)
class Cochain:
    """A homogeneous cochain in ``Hom(source, target)_weight``."""

    X: ToricVariety = field(repr=False, compare=False)
    source: Bundle
    target: Bundle
    weight: tuple[int, ...]
    degree: int
    values: dict[Chain, int]

    def __post_init__(self):
        for c, v in self.values.items():
            if len(c) != self.degree + 1:
                raise ValueError(f"chain {c} does not have degree {self.degree}")

    @property
    def positive(self) -> frozenset[int]:
        return pattern(self.X, self.source, self.target, self.weight).positive

    @property
    def is_zero(self) -> bool:
        return not any(self.values.values())

    def nonzero(self) -> dict[Chain, int]:
        return {c: v for c, v in self.values.items() if v}

    def __add__(self, other: "Cochain") -> "Cochain":
        _check_same_space(self, other)
        vals = dict(self.values)
        for c, v in other.values.items():
            vals[c] = vals.get(c, 0) + v
        return _with(self, vals)

    def __neg__(self) -> "Cochain":
        return _with(self, {c: -v for c, v in self.values.items()})

    def scale(self, k: int) -> "Cochain":
        return _with(self, {c: k * v for c, v in self.values.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.source, self.target, self.weight) == (other.source, other.target, other.weight) \
            and (self.degree == other.degree or self.is_zero and other.is_zero) \
            and self.nonzero() == other.nonzero()

    __hash__ = None  # type: ignore[assignment]


def _with(c: Cochain, values: dict[Chain, int]) -> Cochain:
    return Cochain(c.X, c.source, c.target, c.weight, c.degree, values)


def _check_same_space(a: Cochain, b: Cochain) -> None:
    if (a.source, a.target, a.weight, a.degree) != (b.source, b.target, b.weight, b.degree):
        raise ValueError("cochains live in different spaces")


def zero_cochain(X, L0, L1, u, degree: int) -> Cochain:
    return Cochain(X, tuple(L0), tuple(L1), tuple(u), degree, {})


def generator(X, L0, L1, u, chain: Chain, coeff: int = 1) -> Cochain:
    chain = tuple(chain)
    m = model(X)
    if not m.admissible(chain, pattern(X, L0, L1, u).positive):
        raise ValueError(f"chain {chain} is killed at this weight")
    return Cochain(X, tuple(L0), tuple(L1), tuple(u), len(chain) - 1, {chain: coeff})


def basis(X, L0, L1, u, degree: int) -> list[Chain]:
    cx = cech_complex(X, L0, L1, u)
    return list(cx.basis[degree]) if degree < len(cx.basis) else []


def unit(X: ToricVariety, L: Sequence[int]) -> Cochain:
    """Constant 1 on every 0-chain of ``Hom(L, L)_0``."""
    zero = tuple(0 for _ in range(X.dim))
    m = model(X)
    return Cochain(X, tuple(L), tuple(L), zero, 0, {c: 1 for c in m.chains[0]})


def differential(phi: Cochain) -> Cochain:
    m = model(phi.X)
    pos = phi.positive
    out: dict[Chain, int] = {}
    for c, v in phi.values.items():
        if not v:
            continue
        for new, s in m.insertions(c):
            if m.admissible(new, pos):
                out[new] = out.get(new, 0) + s * v
    return Cochain(phi.X, phi.source, phi.target, phi.weight, phi.degree + 1, out)


def cech_cup(phi: Cochain, psi: Cochain) -> Cochain:
    """Composite ``phi o psi`` for ``psi: L0 -> L1`` and ``phi: L1 -> L2``.

    ``psi``'s chain comes first and must end where ``phi``'s begins; the
    Koszul factor ``(-1)^{|phi||psi|}`` makes the graded Leibniz rule hold
    in the ``d(phi psi) = d(phi) psi + (-1)^|phi| phi d(psi)`` form.
    """
    if psi.target != phi.source:
        raise CompositionError("phi must start at the bundle where psi ends")
    if psi.X.fan != phi.X.fan:
        raise CompositionError("cochains over different fans")
    X = psi.X
    u = tuple(a + b for a, b in zip(psi.weight, phi.weight))
    pos = pattern(X, psi.source, phi.target, u).positive
    m = model(X)
    sign = -1 if (phi.degree * psi.degree) % 2 else 1
    by_first: dict[int, list[tuple[Chain, int]]] = {}
    for c, v in phi.values.items():
        if v:
            by_first.setdefault(c[0], []).append((c, v))
    out: dict[Chain, int] = {}
    for c, v in psi.values.items():
        if not v:
            continue
        for c2, w in by_first.get(c[-1], ()):
            new = c + c2[1:]
            if m.admissible(new, pos):
                out[new] = out.get(new, 0) + sign * v * w
    return Cochain(X, psi.source, phi.target, u, phi.degree + psi.degree, out)


# --- graded Hom ----------------------------------------------------------------

@dataclass(frozen=True)
class ChamberRecord:
    positive: frozenset[int]
    feasible: Optional[bool]
    bounded: Optional[bool]
    nonzero: Optional[bool]
    points: int


@dataclass(frozen=True)
class GradedHom:
    source: Bundle
    target: Bundle
    pieces: dict[tuple[int, ...], CohomologyResult]
    certificate: tuple[ChamberRecord, ...]

    def total_rank(self, k: int) -> int:
        return sum(h.rank(k) for h in self.pieces.values())

    def weights(self, k: Optional[int] = None) -> list[tuple[int, ...]]:
        return sorted(u for u, h in self.pieces.items() if k is None or h.rank(k) or h.torsion_at(k))

    @property
    def euler(self) -> int:
        return sum(h.euler for h in self.pieces.values())

    def table(self) -> list[tuple[tuple[int, ...], int, int, tuple[int, ...]]]:
        rows = []
        for u in sorted(self.pieces):
            h = self.pieces[u]
            for k in h.nonzero_degrees():
                rows.append((u, k, h.rank(k), h.torsion_at(k)))
        return rows


def chamber_constraints(X: ToricVariety, D: Sequence[int], positive: frozenset[int]):
    cons = []
    for i, (ray, c) in enumerate(zip(X.fan.rays, D)):
        if i in positive:
            cons.append(lin.ge(ray, c + 1))
        else:
            cons.append(lin.le(ray, c))
    return cons


def graded_hom(X: ToricVariety, L0: Sequence[int], L1: Sequence[int]) -> GradedHom:
    D = bundle_difference(L1, L0)
    m = model(X)
    n, r = X.dim, X.n_rays
    pieces: dict[tuple[int, ...], CohomologyResult] = {}
    records = []
    for bits in product((False, True), repeat=r):
        positive = frozenset(i for i, b in enumerate(bits) if b)
        h = m.cohomology(positive)
        if h.is_zero:
            # vanishing holds on the whole chamber whether or not it is empty
            records.append(ChamberRecord(positive, None, None, False, 0))
            continue
        cons = chamber_constraints(X, D, positive)
        if not lin.feasible(cons, n):
            records.append(ChamberRecord(positive, False, None, True, 0))
            continue
        if not lin.is_bounded(cons, n):
            raise InconsistencyError(
                f"pattern {sorted(positive)} has nonzero cohomology on an unbounded chamber")
        pts = list(lin.integer_points(cons, n))
        for u in pts:
            pieces[u] = h
        records.append(ChamberRecord(positive, True, True, True, len(pts)))
    return GradedHom(tuple(L0), tuple(L1), pieces, tuple(records))


def euler_characteristic(X: ToricVariety, L0: Sequence[int], L1: Sequence[int]) -> int:
    return graded_hom(X, L0, L1).euler


def random_cochain(X: ToricVariety, L0, L1, u, degree: int, rng, lo: int = -3, hi: int = 3) -> Cochain:
    vals = {c: rng.randint(lo, hi) for c in basis(X, L0, L1, u, degree)}
    return Cochain(X, tuple(L0), tuple(L1), tuple(u), degree, vals)


DifferentialFn = Callable[[Cochain], Cochain]

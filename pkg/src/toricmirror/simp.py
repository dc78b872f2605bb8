"""Mirror-side combinatorics on the barycentric subdivision of ``Q``.

Simplices of an ordered simplicial complex are stored as increasing vertex
tuples. For ``Q_b`` the vertices are face ids of ``Q`` and a simplex is a
strictly nested chain. Dual cells are labelled by the simplex they are dual
to, so the cellular model shares its basis with the simplicial one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from operator import mul
from typing import Callable, Iterable, Optional, Sequence

from .chains import ChainMap, FreeComplex
from .lattice import FacePoset, ToricVariety

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class OrderedComplex:
    """A simplicial complex whose simplices are increasing vertex tuples."""

    simplices: tuple[tuple[Simplex, ...], ...]

    @cached_property
    def index(self) -> list[dict[Simplex, int]]:
        return [{s: i for i, s in enumerate(level)} for level in self.simplices]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    def counts(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def contains(self, s: Simplex) -> bool:
        k = len(s) - 1
        return 0 <= k < len(self.simplices) and s in self.index[k]

    def boundary(self, k: int) -> dict[tuple[int, int], int]:
        """``C_k -> C_{k-1}``, ``d[v_0..v_k] = sum (-1)^i [.. v_i omitted ..]``."""
        out = {}
        if k <= 0 or k >= len(self.simplices):
            return out
        lower = self.index[k - 1]
        for j, s in enumerate(self.simplices[k]):
            for i in range(len(s)):
                out[(lower[s[:i] + s[i + 1:]], j)] = -1 if i % 2 else 1
        return out


def standard_simplex(d: int) -> OrderedComplex:
    verts = range(d + 1)
    return OrderedComplex(tuple(tuple(combinations(verts, k + 1)) for k in range(d + 1)))


def barycentric(fp: FacePoset) -> OrderedComplex:
    """All strictly nested chains, grown level by level from comparable pairs."""
    n = len(fp)
    if n == 0:
        raise ValueError("empty face poset")
    less = {(a, b) for a in range(n) for b in range(n) if a != b and fp.leq(a, b)}
    levels = [tuple((v,) for v in range(n))]
    while True:
        nxt = set()
        for s in levels[-1]:
            for v in range(s[-1] + 1, n):
                if all((x, v) in less for x in s):
                    nxt.add(s + (v,))
        if not nxt:
            break
        levels.append(tuple(sorted(nxt)))
    return OrderedComplex(tuple(levels))


# --- relative cochains ------------------------------------------------------------

@dataclass(frozen=True)
class PlusSubcomplex:
    """Full subcomplex on the faces lying in some positive facet."""

    vertices: frozenset[int]

    def contains(self, s: Simplex) -> bool:
        return all(v in self.vertices for v in s)

    def __or__(self, other: "PlusSubcomplex") -> "PlusSubcomplex":
        return PlusSubcomplex(self.vertices | other.vertices)


EMPTY = PlusSubcomplex(frozenset())


def plus_subcomplex(fp: FacePoset, positive: Iterable[int]) -> PlusSubcomplex:
    facets = fp.facets
    targets = [facets[r] for r in positive]
    return PlusSubcomplex(frozenset(f.id for f in fp.faces
                                    if any(fp.leq(f.id, t) for t in targets)))


def relative_basis(qb: OrderedComplex, a: PlusSubcomplex) -> list[list[Simplex]]:
    return [[s for s in level if not a.contains(s)] for level in qb.simplices]


def relative_cochain_complex(qb: OrderedComplex, a: PlusSubcomplex) -> FreeComplex:
    basis = relative_basis(qb, a)
    keep = [{s: i for i, s in enumerate(level)} for level in basis]
    ds = []
    for k in range(len(basis)):
        m = {}
        for (i, j), v in qb.boundary(k + 1).items():
            # transpose: the coboundary of the k-simplex i hits the (k+1)-simplex j
            lo = qb.simplices[k][i]
            hi = qb.simplices[k + 1][j]
            if lo in keep[k] and hi in keep[k + 1]:
                m[(keep[k + 1][hi], keep[k][lo])] = v
        ds.append(m)
    return FreeComplex.build(0, basis, ds)


@dataclass(frozen=True)
class RelCochain:
    """Homogeneous cochain of degree ``degree`` vanishing on ``rel``."""

    complex: OrderedComplex = field(repr=False, compare=False)
    rel: PlusSubcomplex
    degree: int
    values: dict[Simplex, int]

    def nonzero(self) -> dict[Simplex, int]:
        return {s: v for s, v in self.values.items() if v}

    def coboundary(self) -> "RelCochain":
        out: dict[Simplex, int] = {}
        k = self.degree
        if k + 1 < len(self.complex.simplices):
            for hi in self.complex.simplices[k + 1]:
                if self.rel.contains(hi):
                    continue
                total = 0
                for i in range(len(hi)):
                    total += (-1) ** i * self.values.get(hi[:i] + hi[i + 1:], 0)
                if total:
                    out[hi] = total
        return RelCochain(self.complex, self.rel, k + 1, out)


def simp_cup(phi: RelCochain, psi: RelCochain) -> RelCochain:
    """``(phi u psi)[v_0..v_k] = sum_i phi[v_0..v_i] psi[v_i..v_k]``."""
    K = phi.complex
    rel = phi.rel | psi.rel
    k = phi.degree + psi.degree
    out: dict[Simplex, int] = {}
    if k < len(K.simplices):
        for s in K.simplices[k]:
            if rel.contains(s):
                continue
            total = 0
            for i in range(len(s)):
                total += phi.values.get(s[:i + 1], 0) * psi.values.get(s[i:], 0)
            if total:
                out[s] = total
    return RelCochain(K, rel, k, out)


def unit_cochain(K: OrderedComplex) -> RelCochain:
    return RelCochain(K, EMPTY, 0, {s: 1 for s in K.simplices[0]})


# --- the weighted category on Q_b ------------------------------------------------

class SimpModel:
    def __init__(self, X: ToricVariety):
        self.X = X
        self.qb = barycentric(X.poset)
        self.rays = X.fan.rays
        self._plus: dict[frozenset[int], PlusSubcomplex] = {}
        self._complex: dict[frozenset[int], FreeComplex] = {}

    def positive(self, L0, L1, u) -> frozenset[int]:
        """Facets where ``<u, v_rho> > L1_rho - L0_rho``."""
        return frozenset([i for i, (r, a, b) in enumerate(zip(self.rays, L0, L1))
                          if sum(map(mul, u, r)) > b - a])

    def plus(self, positive: frozenset[int]) -> PlusSubcomplex:
        hit = self._plus.get(positive)
        if hit is None:
            hit = plus_subcomplex(self.X.poset, positive)
            self._plus[positive] = hit
        return hit

    def complex(self, positive: frozenset[int]) -> FreeComplex:
        hit = self._complex.get(positive)
        if hit is None:
            hit = relative_cochain_complex(self.qb, self.plus(positive))
            self._complex[positive] = hit
        return hit


_MODELS: dict[int, tuple[ToricVariety, SimpModel]] = {}


def simp_model(X: ToricVariety) -> SimpModel:
    hit = _MODELS.get(id(X))
    if hit is None or hit[0] is not X:
        hit = (X, SimpModel(X))
        _MODELS[id(X)] = hit
    return hit[1]


@dataclass(frozen=True)
class SimpHom:
    """An element of ``Hom(source, target)_weight`` in the simplicial model."""

    X: ToricVariety = field(repr=False, compare=False)
    source: tuple[int, ...]
    target: tuple[int, ...]
    weight: tuple[int, ...]
    cochain: RelCochain

    @property
    def degree(self) -> int:
        return self.cochain.degree

    def nonzero(self):
        return self.cochain.nonzero()


def simp_hom(X, L0, L1, u, degree: int, values: dict[Simplex, int]) -> SimpHom:
    m = simp_model(X)
    rel = m.plus(m.positive(L0, L1, u))
    bad = [s for s in values if rel.contains(s)]
    if bad:
        raise ValueError(f"simplex {bad[0]} lies in the positive subcomplex")
    return SimpHom(X, tuple(L0), tuple(L1), tuple(u), RelCochain(m.qb, rel, degree, dict(values)))


def compose(phi: SimpHom, psi: SimpHom) -> SimpHom:
    """``phi o psi`` with ``psi: L0 -> L1`` applied first, Koszul-signed."""
    if psi.target != phi.source:
        raise ValueError("phi must start at the bundle where psi ends")
    X = psi.X
    m = simp_model(X)
    u = tuple(a + b for a, b in zip(psi.weight, phi.weight))
    rel = m.plus(m.positive(psi.source, phi.target, u))
    prod = simp_cup(psi.cochain, phi.cochain)
    sign = -1 if (phi.degree * psi.degree) % 2 else 1
    vals = {s: sign * v for s, v in prod.values.items() if not rel.contains(s)}
    return SimpHom(X, psi.source, phi.target, u, RelCochain(m.qb, rel, prod.degree, vals))


# --- the local model of two subdivisions in simplicial position ------------------

class Copy(Enum):
    UNSHIFTED = 0
    SHIFTED = 1


class Outcome(Enum):
    EMPTY = "empty"
    SAME = "same-dimension"
    COLLAPSED = "collapsed"


@dataclass(frozen=True)
class PiModelCell:
    """The dual of the face ``face`` of ``Delta^d`` in one of the two copies."""

    d: int
    face: Simplex
    copy: Copy = Copy.UNSHIFTED

    def __post_init__(self):
        f = self.face
        if not f or any(a >= b for a, b in zip(f, f[1:])) or f[0] < 0 or f[-1] > self.d:
            raise ValueError(f"{f} is not a face of Delta^{self.d}")

    @property
    def codim(self) -> int:
        return len(self.face) - 1


@dataclass(frozen=True)
class PiResult:
    outcome: Outcome
    cell: Optional[PiModelCell] = None


def _classify(sigma: Simplex, tau: Simplex, exists: Callable[[Simplex], bool]):
    if sigma[-1] > tau[0]:
        return Outcome.EMPTY, None
    if sigma[-1] == tau[0]:
        rho = sigma + tau[1:]
        return (Outcome.SAME, rho) if exists(rho) else (Outcome.EMPTY, None)
    rho = sigma + tau
    return (Outcome.COLLAPSED, rho) if exists(rho) else (Outcome.EMPTY, None)


def pi_intersect_collapse(sigma: PiModelCell, tau: PiModelCell) -> PiResult:
    """Intersect an unshifted dual cell with a shifted one and collapse."""
    if sigma.d != tau.d:
        raise ValueError("cells of different simplices")
    if sigma.copy is not Copy.UNSHIFTED or tau.copy is not Copy.SHIFTED:
        raise ValueError("first cell must be unshifted, second shifted")
    outcome, rho = _classify(sigma.face, tau.face, lambda s: True)
    if rho is None:
        return PiResult(outcome)
    return PiResult(outcome, PiModelCell(sigma.d, rho, Copy.SHIFTED))


CellChain = dict[Simplex, int]


def cell_intersection_product(a: CellChain, b: CellChain,
                              K: Optional[OrderedComplex] = None) -> CellChain:
    """Intersection of dual-cell chains followed by the collapse onto copy 1.

    Cells whose intersection collapses onto a lower dimensional cell vanish
    on cellular chains, so only the same-dimension outcome contributes.
    """
    exists = (lambda s: True) if K is None else K.contains
    out: CellChain = {}
    for s, x in a.items():
        if not x:
            continue
        for t, y in b.items():
            if not y:
                continue
            outcome, rho = _classify(s, t, exists)
            if outcome is Outcome.SAME:
                out[rho] = out.get(rho, 0) + x * y
    return {s: v for s, v in out.items() if v}


def cellular_complex(K: OrderedComplex, a: PlusSubcomplex = EMPTY) -> FreeComplex:
    """Dual-cell chains of ``K`` minus ``a``, indexed by codimension.

    The cell dual to a k-simplex sits in degree k; its boundary consists of
    the cells dual to the simplices one vertex larger, oriented so that the
    incidence with the cell obtained by inserting a vertex at slot i is
    ``(-1)^i``.
    """
    basis = [[("cell", s) for s in level if not a.contains(s)] for level in K.simplices]
    where = [{lab[1]: i for i, lab in enumerate(level)} for level in basis]
    ds = []
    for k, level in enumerate(basis):
        m = {}
        if k + 1 < len(basis):
            for j, (_, s) in enumerate(level):
                for hi in _cofaces(K, s):
                    i = where[k + 1].get(hi)
                    if i is None:
                        continue
                    slot = next(p for p in range(len(hi)) if p == len(s) or hi[p] != s[p])
                    m[(i, j)] = -1 if slot % 2 else 1
        ds.append(m)
    return FreeComplex.build(0, basis, ds)


def _cofaces(K: OrderedComplex, s: Simplex) -> list[Simplex]:
    k = len(s)
    if k >= len(K.simplices):
        return []
    ss = set(s)
    return [t for t in K.simplices[k] if ss.issubset(t)]


def cell_to_simp(chain: CellChain) -> dict[Simplex, int]:
    """Dual cell of a simplex goes to that simplex's indicator cochain."""
    return dict(chain)


def cell_to_simp_map(K: OrderedComplex, a: PlusSubcomplex = EMPTY) -> ChainMap:
    cell = cellular_complex(K, a)
    simp = relative_cochain_complex(K, a)
    maps = {}
    for k in cell.degrees:
        target = simp.index(k)
        maps[k] = {(target[lab[1]], j): 1 for j, lab in enumerate(cell.basis[k])}
    return ChainMap(cell, simp, maps)


# --- local model suites ----------------------------------------------------------

def square_discrepancy(K: OrderedComplex, rel: PlusSubcomplex = EMPTY) -> Optional[str]:
    """First generator pair where intersection-then-collapse differs from the cup."""
    cells = [(k, s) for k, level in enumerate(K.simplices) for s in level if not rel.contains(s)]
    for i, s in cells:
        phi = RelCochain(K, rel, i, {s: 1})
        for j, t in cells:
            lhs = cell_to_simp(cell_intersection_product({s: 1}, {t: 1}, K))
            rhs = simp_cup(phi, RelCochain(K, rel, j, {t: 1})).nonzero()
            if lhs != rhs:
                return f"{s} . {t}: cellular {lhs} vs cup {rhs}"
    return None


def trichotomy_discrepancy(d: int) -> Optional[str]:
    """Check that every face pair of ``Delta^d`` gets exactly one outcome."""
    faces = [s for level in standard_simplex(d).simplices for s in level]
    for s in faces:
        for t in faces:
            res = pi_intersect_collapse(PiModelCell(d, s), PiModelCell(d, t, Copy.SHIFTED))
            conds = {Outcome.EMPTY: s[-1] > t[0], Outcome.SAME: s[-1] == t[0],
                     Outcome.COLLAPSED: s[-1] < t[0]}
            if sum(conds.values()) != 1 or not conds[res.outcome]:
                return f"{s}, {t}: {res.outcome.value}"
            if res.outcome is not Outcome.EMPTY and len(res.cell.face) != len(set(s) | set(t)):
                return f"{s}, {t}: result {res.cell.face} is not the joined face"
    return None

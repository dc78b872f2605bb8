"""Free Z-cochain complexes and their exact integral cohomology.

Differentials raise degree by one. ``d[k]`` maps ``C^k -> C^{k+1}`` and is
stored sparsely as ``{(row, col): value}`` with rows indexed by ``basis[k+1]``
and columns by ``basis[k]``. All arithmetic uses Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Optional, Sequence

Sparse = dict[tuple[int, int], int]
Matrix = list[list[int]]


class ComplexError(ValueError):
    pass


def _clean(m: Mapping[tuple[int, int], int]) -> Sparse:
    return {k: v for k, v in m.items() if v}


def dense(m: Mapping[tuple[int, int], int], rows: int, cols: int) -> Matrix:
    out = [[0] * cols for _ in range(rows)]
    for (i, j), v in m.items():
        out[i][j] = v
    return out


def sparse(m: Sequence[Sequence[int]]) -> Sparse:
    return {(i, j): v for i, row in enumerate(m) for j, v in enumerate(row) if v}


def compose_sparse(a: Sparse, b: Sparse) -> Sparse:
    """Matrix product ``a @ b``."""
    by_row: dict[int, list[tuple[int, int]]] = {}
    for (k, j), v in b.items():
        by_row.setdefault(k, []).append((j, v))
    out: dict[tuple[int, int], int] = {}
    for (i, k), v in a.items():
        for j, w in by_row.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + v * w
    return _clean(out)


@dataclass(frozen=True)
class FreeComplex:
    lo: int
    basis: tuple[tuple[Hashable, ...], ...]
    d: tuple[Sparse, ...]

    def __post_init__(self):
        if len(self.d) != len(self.basis):
            raise ComplexError("need one differential per degree (the last one maps to zero)")
        for i, m in enumerate(self.d):
            rows = len(self.basis[i + 1]) if i + 1 < len(self.basis) else 0
            cols = len(self.basis[i])
            for (r, c) in m:
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ComplexError(
                        f"d^{self.lo + i} entry ({r}, {c}) outside shape {rows}x{cols}")

    @classmethod
    def build(cls, lo: int, basis: Sequence[Sequence[Hashable]],
              d: Optional[Sequence[Mapping[tuple[int, int], int]]] = None) -> "FreeComplex":
        basis_t = tuple(tuple(b) for b in basis)
        if d is None:
            d = [{} for _ in basis_t]
        d_t = list(_clean(m) for m in d)
        d_t += [{} for _ in range(len(basis_t) - len(d_t))]
        return cls(lo, basis_t, tuple(d_t))

    @property
    def hi(self) -> int:
        return self.lo + len(self.basis) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def rank(self, k: int) -> int:
        if k < self.lo or k > self.hi:
            return 0
        return len(self.basis[k - self.lo])

    def differential(self, k: int) -> Sparse:
        if k < self.lo or k > self.hi:
            return {}
        return self.d[k - self.lo]

    def dense_differential(self, k: int) -> Matrix:
        return dense(self.differential(k), self.rank(k + 1), self.rank(k))

    def index(self, k: int) -> dict[Hashable, int]:
        return {b: i for i, b in enumerate(self.basis[k - self.lo])}


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    degree: Optional[int] = None
    column: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_complex(c: FreeComplex) -> VerifyResult:
    for k in c.degrees:
        sq = compose_sparse(c.differential(k + 1), c.differential(k))
        if sq:
            col = min(j for _, j in sq)
            return VerifyResult(False, k, col)
    return VerifyResult(True)


# --- Smith normal form -------------------------------------------------------

@dataclass(frozen=True)
class SNF:
    """``U @ M @ V == D`` with ``U`` and ``V`` unimodular."""

    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def divisors(self) -> list[int]:
        out = []
        for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)):
            if self.D[i][i] == 0:
                break
            out.append(self.D[i][i])
        return out


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]], transforms: bool = True) -> SNF:
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    U = _identity(rows) if transforms else []
    V = _identity(cols) if transforms else []

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        ra, rs = a[dst], a[src]
        for k in range(cols):
            if rs[k]:
                ra[k] += q * rs[k]
        if transforms:
            ua, us = U[dst], U[src]
            for k in range(rows):
                if us[k]:
                    ua[k] += q * us[k]

    def add_col(src, dst, q):  # col dst += q * col src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if transforms:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(t, i, -q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(t, j, -q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if transforms:
                U[t] = [-x for x in U[t]]
        t += 1
    return SNF(U, a, V)


def elementary_divisors(m: Sequence[Sequence[int]]) -> list[int]:
    if not m or not m[0]:
        return []
    return smith_normal_form(m, transforms=False).divisors


def _sparse_divisors(m: Sparse, rows: int, cols: int) -> list[int]:
    if not m:
        return []
    return elementary_divisors(dense(m, rows, cols))


# --- cohomology --------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyResult:
    lo: int
    ranks: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for tors in self.torsion:
            if any(t <= 1 for t in tors):
                raise ValueError("torsion divisors must exceed 1")
            if any(b % a for a, b in zip(tors, tors[1:])):
                raise ValueError("torsion divisors must form a divisibility chain")

    def rank(self, k: int) -> int:
        i = k - self.lo
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def torsion_at(self, k: int) -> tuple[int, ...]:
        i = k - self.lo
        return self.torsion[i] if 0 <= i < len(self.torsion) else ()

    @property
    def is_zero(self) -> bool:
        return not any(self.ranks) and not any(self.torsion)

    @property
    def euler(self) -> int:
        return sum((-1) ** (self.lo + i) * r for i, r in enumerate(self.ranks))

    def nonzero_degrees(self) -> list[int]:
        return [self.lo + i for i in range(len(self.ranks)) if self.ranks[i] or self.torsion[i]]


def cohomology(c: FreeComplex) -> CohomologyResult:
    check = verify_complex(c)
    if not check:
        raise ComplexError(f"d∘d != 0 at degree {check.degree}, column {check.column}")
    divs = {k: _sparse_divisors(c.differential(k), c.rank(k + 1), c.rank(k))
            for k in range(c.lo - 1, c.hi + 1)}
    ranks, tors = [], []
    for k in c.degrees:
        ranks.append(c.rank(k) - len(divs[k]) - len(divs[k - 1]))
        tors.append(tuple(x for x in divs[k - 1] if x > 1))
    return CohomologyResult(c.lo, tuple(ranks), tuple(tors))


# --- chain maps and cones -----------------------------------------------------

@dataclass(frozen=True)
class ChainMap:
    source: FreeComplex
    target: FreeComplex
    maps: dict[int, Sparse] = field(default_factory=dict)

    def at(self, k: int) -> Sparse:
        return self.maps.get(k, {})


def identity_map(c: FreeComplex) -> ChainMap:
    return ChainMap(c, c, {k: {(i, i): 1 for i in range(c.rank(k))} for k in c.degrees})


def zero_map(a: FreeComplex, b: FreeComplex) -> ChainMap:
    return ChainMap(a, b, {})


def verify_chain_map(f: ChainMap) -> VerifyResult:
    a, b = f.source, f.target
    for k in range(min(a.lo, b.lo) - 1, max(a.hi, b.hi) + 1):
        for (i, j) in f.at(k):
            if i >= b.rank(k) or j >= a.rank(k):
                raise ComplexError(f"chain map entry ({i}, {j}) outside shape in degree {k}")
        lhs = compose_sparse(b.differential(k), f.at(k))
        rhs = compose_sparse(f.at(k + 1), a.differential(k))
        diff = _clean({key: lhs.get(key, 0) - rhs.get(key, 0) for key in set(lhs) | set(rhs)})
        if diff:
            return VerifyResult(False, k, min(j for _, j in diff))
    return VerifyResult(True)


def mapping_cone(f: ChainMap) -> FreeComplex:
    """``Cone^k = A^{k+1} + B^k`` with ``d(a, b) = (-d_A a, f(a) + d_B b)``."""
    a, b = f.source, f.target
    lo = min(a.lo - 1, b.lo)
    hi = max(a.hi - 1, b.hi)
    basis, ds = [], []
    for k in range(lo, hi + 1):
        basis.append([("A", x) for x in _basis(a, k + 1)] + [("B", x) for x in _basis(b, k)])
    for k in range(lo, hi + 1):
        na_src, na_tgt = a.rank(k + 1), a.rank(k + 2)
        m: Sparse = {}
        for (i, j), v in a.differential(k + 1).items():
            m[(i, j)] = -v
        for (i, j), v in f.at(k + 1).items():
            m[(na_tgt + i, j)] = v
        for (i, j), v in b.differential(k).items():
            m[(na_tgt + i, na_src + j)] = v
        if k == hi:
            m = {}
        ds.append(m)
    return FreeComplex.build(lo, basis, ds)


def _basis(c: FreeComplex, k: int) -> tuple:
    if k < c.lo or k > c.hi:
        return ()
    return c.basis[k - c.lo]


def cone_acyclic(f: ChainMap) -> bool:
    check = verify_chain_map(f)
    if not check:
        raise ComplexError(f"not a chain map: fails in degree {check.degree}")
    return cohomology(mapping_cone(f)).is_zero

"""Ribbon trees, Stasheff facets, shrubs and their sign conventions.

A planar tree shape is a nested tuple: a leaf is ``()`` and an internal vertex
is the tuple of its children from left to right. Edges are named by their path
from the node, so ``()`` is the outgoing edge and ``(0, 1)`` is the right
child of the leftmost child of the root vertex.

Dexterity convention: looking toward the outgoing vertex, the geodesic takes a
right turn whenever it leaves a vertex through its leftmost incoming edge,
including the turn at the root vertex. This is the handedness for which
``wall_crossing_check`` passes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Optional, Union

Shape = tuple
Path = tuple[int, ...]
LEAF: Shape = ()


class TreeError(ValueError):
    pass


def is_leaf(t: Shape) -> bool:
    return t == ()


def n_leaves(t: Shape) -> int:
    return 1 if is_leaf(t) else sum(n_leaves(c) for c in t)


def subtree(t: Shape, path: Path) -> Shape:
    for i in path:
        if is_leaf(t) or not 0 <= i < len(t):
            raise TreeError(f"{path} is not an edge")
        t = t[i]
    return t


def edges(t: Shape) -> list[Path]:
    out: list[Path] = []

    def walk(s, path):
        out.append(path)
        if not is_leaf(s):
            for i, c in enumerate(s):
                walk(c, path + (i,))

    walk(t, ())
    return out


def spans(t: Shape) -> dict[Path, tuple[int, int]]:
    """Leaves above each edge as a half-open 0-based interval."""
    out = {}

    def walk(s, path, start):
        n = n_leaves(s)
        out[path] = (start, start + n)
        if not is_leaf(s):
            for i, c in enumerate(s):
                walk(c, path + (i,), start)
                start += n_leaves(c)

    walk(t, (), 0)
    return out


def is_trivalent(t: Shape) -> bool:
    return is_leaf(t) or (len(t) == 2 and all(is_trivalent(c) for c in t))


def _check_shape(t: Shape) -> None:
    if not isinstance(t, tuple):
        raise TreeError(f"bad tree shape {t!r}")
    if not is_leaf(t):
        if len(t) < 2:
            raise TreeError("internal vertices need at least two incoming edges")
        for c in t:
            _check_shape(c)


# --- enumeration ----------------------------------------------------------------

@lru_cache(maxsize=None)
def _trees(n: int, trivalent: bool) -> tuple[Shape, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for parts in _compositions(n, 2, 2 if trivalent else n):
        for kids in _product([_trees(p, trivalent) for p in parts]):
            out.append(tuple(kids))
    return tuple(out)


def _compositions(n: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``n`` into between ``lo`` and ``hi`` positive parts."""
    for k in range(lo, min(hi, n) + 1):
        for cuts in combinations(range(1, n), k - 1):
            b = (0,) + cuts + (n,)
            yield tuple(b[i + 1] - b[i] for i in range(k))


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


def enumerate_ribbon_trees(d: int, trivalent_only: bool = True) -> list[Shape]:
    if d < 2:
        raise TreeError("need at least two incoming leaves")
    return list(_trees(d, trivalent_only))


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def internal_edges(t: Shape) -> list[Path]:
    return [p for p in edges(t) if p and not is_leaf(subtree(t, p))]


# --- Stasheff polyhedron -------------------------------------------------------------

def stasheff_facets(d: int) -> list[tuple[int, int, int]]:
    """``(d1, d2, i)``: a ``d2``-input tree grafted onto input ``i`` of a ``d1``-input one."""
    if d < 2:
        raise TreeError("need at least two incoming leaves")
    return [(d1, d + 1 - d1, i)
            for d1 in range(2, d)
            for i in range(1, d1 + 1)]


def facet_tree(d1: int, d2: int, i: int) -> Shape:
    inner = tuple(LEAF for _ in range(d2))
    return tuple(inner if j == i - 1 else LEAF for j in range(d1))


# --- labels -----------------------------------------------------------------------------

def label_edges(t: Shape) -> dict[Path, tuple[int, int]]:
    """Label every edge by the complementary regions on its two sides.

    Regions ``0..d`` are numbered left to right around the disc; an edge whose
    region on the left is ``j`` and on the right is ``i`` carries ``f_i - f_j``.
    """
    _check_shape(t)
    labels: dict[Path, tuple[int, int]] = {}
    region = 0

    def walk(s, path):
        nonlocal region
        left = region
        if is_leaf(s):
            region += 1
        else:
            for i, c in enumerate(s):
                walk(c, path + (i,))
        labels[path] = (left, region)

    walk(t, ())
    return labels


def check_balance(t: Shape, labels: Optional[dict] = None) -> bool:
    labels = labels or label_edges(t)
    for p in edges(t):
        s = subtree(t, p)
        if is_leaf(s):
            continue
        kids = [labels[p + (i,)] for i in range(len(s))]
        if any(a[1] != b[0] for a, b in zip(kids, kids[1:])):
            return False
        if (kids[0][0], kids[-1][1]) != labels[p]:
            return False
    return True


# --- dexterity and shrub orientation ---------------------------------------------------

RIGHT_TURN_CHILD = 0  # leaving through the leftmost incoming edge turns right


def dexterity(t: Shape, e: Path, right_turn_child: int = RIGHT_TURN_CHILD) -> int:
    """Right turns on the way from ``e`` to the outgoing vertex.

    ``right_turn_child=1`` selects the mirror-image handedness.
    """
    if not is_trivalent(t):
        raise TreeError("dexterity is defined on trivalent trees")
    subtree(t, e)
    return sum(1 for i in e if i == right_turn_child)


def _perm_sign(seq: list, ref: list) -> int:
    idx = [ref.index(x) for x in seq]
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign


def coordinate_edges(t: Shape) -> list[list[Path]]:
    """The ordered edge sets ``E_1, ..., E_d`` of a trivalent shrub."""
    sp = spans(t)
    leaves = sorted((p for p in edges(t) if p and is_leaf(subtree(t, p))), key=lambda p: sp[p])
    seen: set[Path] = set()
    out = []
    for i, leaf in enumerate(leaves):
        group = []
        for k in range(1, len(leaf) + 1):
            p = leaf[:k]
            if i > 0 and k == len(leaf):
                continue
            if p not in seen:
                seen.add(p)
                group.append(p)
        out.append(group)
    return out


@dataclass(frozen=True)
class Orientation:
    edges: tuple[Path, ...]
    sign: int
    spans: tuple[tuple[int, int], ...]


def shrub_orientation(t: Shape, right_turn_child: int = RIGHT_TURN_CHILD) -> Orientation:
    """Coordinate edges in order, with the sign of the oriented wedge.

    The sign compares ``wedge (-1)^{r(e)} de`` with the wedge of the same
    edges listed by leaf span.
    """
    if not is_trivalent(t) or is_leaf(t):
        raise TreeError("shrub orientation needs a trivalent tree")
    sp = spans(t)
    order = [e for group in coordinate_edges(t) for e in group]
    sign = 1
    for e in order:
        sign *= (-1) ** dexterity(t, e, right_turn_child)
    keys = [sp[e] for e in order]
    sign *= _perm_sign(keys, sorted(keys))
    return Orientation(tuple(order), sign, tuple(keys))


def walls(d: int) -> list[Shape]:
    """Trees with one vertex of three incoming edges, all others binary."""
    out = []
    for t in enumerate_ribbon_trees(d, trivalent_only=False):
        valences = [len(subtree(t, p)) for p in edges(t) if not is_leaf(subtree(t, p))]
        if sorted(valences)[-1:] == [3] and valences.count(3) == 1 and set(valences) <= {2, 3}:
            out.append(t)
    return out


def _resolve(t: Shape, left: bool) -> Shape:
    if is_leaf(t):
        return t
    if len(t) == 3:
        x, y, z = (_resolve(c, left) for c in t)
        return ((x, y), z) if left else (x, (y, z))
    return tuple(_resolve(c, left) for c in t)


@dataclass(frozen=True)
class WallResult:
    wall: Shape
    ok: bool
    sign_right: int
    sign_left: int


def wall_crossing_check(d: int, right_turn_child: int = RIGHT_TURN_CHILD) -> list[WallResult]:
    """Compare orientations on both sides of every codimension one wall.

    ``T`` groups the right pair at the quadrivalent vertex (edge ``alpha``),
    ``T'`` the left pair (edge ``alpha'``). Coordinates are matched by leaf
    span, with ``d alpha = -d alpha'``.
    """
    if d < 3:
        raise TreeError("walls exist from three leaves on")
    out = []
    for w in walls(d):
        T, Tp = _resolve(w, False), _resolve(w, True)
        o = shrub_orientation(T, right_turn_child)
        op = shrub_orientation(Tp, right_turn_child)
        (a,) = set(o.spans) - set(op.spans)
        (b,) = set(op.spans) - set(o.spans)
        moved = [b if s == a else s for s in o.spans]
        transported = -o.sign * _perm_sign(moved, sorted(moved)) * _perm_sign(list(o.spans), sorted(o.spans))
        ok = transported == op.sign
        out.append(WallResult(w, ok, o.sign, op.sign))
    return out


# --- sign functions -------------------------------------------------------------------------

def maltese(i: int, degs: list[int]) -> int:
    """``i + sum_{j < i} deg p_j`` mod 2."""
    if i < 0 or i > len(degs):
        raise ValueError("index outside the input list")
    return (i + sum(degs[:i])) % 2


def sigma_twist(deg_q: int, degs_p: list[int], dim_T: int, m: int, d: int) -> int:
    """Orientation twist ``sigma(q, p)`` as a parity."""
    if len(degs_p) < d:
        raise ValueError("need a degree for each of the d inputs")
    total = sum(deg_q + sum(degs_p[:j]) for j in range(d + 1))
    return ((m + 1) * (total + dim_T * (1 + m + d + deg_q))) % 2


# --- shrubs ------------------------------------------------------------------------------------

def order_preserving_partitions(d: int, parts: int) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for cuts in combinations(range(1, d), parts - 1):
        b = (0,) + cuts + (d,)
        out.append(tuple(tuple(range(b[i] + 1, b[i + 1] + 1)) for i in range(parts)))
    return out


@dataclass(frozen=True)
class BoundaryStrata:
    horizontal: dict[int, list]
    infinite_section: bool
    vertical: list[tuple[int, ...]]


def shrub_boundary_types(d: int) -> BoundaryStrata:
    """Horizontal: collapses by ``Part(d, d')`` plus the all-infinite section.

    Vertical: grafting ``n >= 2`` shrubs with ``d_1 + ... + d_n = d`` inputs,
    not all ``d_i = 1``, onto a Stasheff tree with ``n`` inputs.
    """
    if d < 2:
        raise TreeError("need at least two incoming leaves")
    horizontal = {k: order_preserving_partitions(d, k) for k in range(1, d)}
    vertical = [c for c in _compositions(d, 2, d) if any(x != 1 for x in c)]
    return BoundaryStrata(horizontal, True, vertical)


INFINITE = None
Length = Optional[Fraction]


@dataclass(frozen=True)
class Shrub:
    """A metric shrub: finite incoming edges and an infinite outgoing edge.

    ``lengths`` maps every non-outgoing edge path to a positive rational.
    """

    shape: Shape
    lengths: dict[Path, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        _check_shape(self.shape)
        for p in edges(self.shape)[1:]:
            ell = self.lengths.get(p)
            if ell is None:
                raise TreeError(f"edge {p} has no length")
            if Fraction(ell) <= 0:
                raise TreeError(f"edge {p} must have positive length")

    def leaf_distances(self) -> list[Fraction]:
        sp = spans(self.shape)
        leaves = sorted((p for p in edges(self.shape) if p and is_leaf(subtree(self.shape, p))),
                        key=lambda p: sp[p])
        return [sum(Fraction(self.lengths[p[:k]]) for k in range(1, len(p) + 1)) for p in leaves]

    @property
    def equidistant(self) -> bool:
        return len(set(self.leaf_distances())) == 1


def equidistant_shrub(shape: Shape, height: Union[int, Fraction] = None) -> Shrub:
    """Lengths putting every incoming vertex at the same distance from the node."""
    depth = {}

    def levels(s, path):
        depth[path] = len(path)
        if not is_leaf(s):
            for i, c in enumerate(s):
                levels(c, path + (i,))

    levels(shape, ())
    top = max(depth.values())
    h = Fraction(height) if height is not None else Fraction(top + 1)
    lengths = {}
    for p in edges(shape)[1:]:
        if is_leaf(subtree(shape, p)):
            lengths[p] = h - (len(p) - 1)
        else:
            lengths[p] = Fraction(1)
    return Shrub(shape, lengths)

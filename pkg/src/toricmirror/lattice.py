"""Fans, support functions, moment polytopes and their face posets.

All arithmetic is exact: integers for lattice data and
:class:`~fractions.Fraction` for vertices and feasibility questions.

Sign convention used throughout the package: a support function with values
``c`` on the rays cuts out ``Q = {u : <u, v_rho> <= c_rho}``, and the boundary
function of a weight ``u`` is ``H(L, u)_rho = <u, v_rho> - c_rho``, positive
exactly on the facets where the section ``chi^u`` has a pole.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, floor, gcd
from operator import mul, sub
from pathlib import Path
from typing import Iterable, Sequence

from . import _linear as lin

IntVector = tuple[int, ...]


class FanError(ValueError):
    """Structurally malformed fan input (as opposed to a failed predicate)."""


class EmptyPolytopeError(ValueError):
    pass


def _det(m: Sequence[Sequence[int]]) -> int:
    # Bareiss; exact for integer input.
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise FanError("fan dimension must be positive")
        for r in self.rays:
            if len(r) != self.dim:
                raise FanError(f"ray {r} does not live in Z^{self.dim}")
        for cone in self.max_cones:
            if any(not 0 <= i < len(self.rays) for i in cone):
                raise FanError(f"cone {sorted(cone)} has a ray index out of range")
            if len(cone) != self.dim:
                raise FanError(
                    f"cone {sorted(cone)} has {len(cone)} rays, expected {self.dim}")

    @classmethod
    def from_lists(cls, rays: Iterable[Iterable[int]], cones: Iterable[Iterable[int]]) -> "Fan":
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise FanError("a fan needs at least one ray")
        return cls(len(rays[0]), rays, tuple(frozenset(c) for c in cones))

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def walls(self) -> dict[frozenset[int], list[int]]:
        """Map each (n-1)-subset of a maximal cone to the cones containing it."""
        out: dict[frozenset[int], list[int]] = {}
        for ci, cone in enumerate(self.max_cones):
            for wall in combinations(sorted(cone), self.dim - 1):
                out.setdefault(frozenset(wall), []).append(ci)
        return out

    def cone_functional(self, cone: frozenset[int], values: Sequence[int]) -> tuple[Fraction, ...]:
        """The linear functional ``m`` with ``<m, v_rho> = values[rho]`` on the cone."""
        idx = sorted(cone)
        m = lin.solve([self.rays[i] for i in idx], [values[i] for i in idx])
        if m is None:
            raise FanError(f"cone {idx} is not full-dimensional")
        return m


@dataclass(frozen=True)
class FanDiagnostics:
    primitive: bool
    smooth: bool
    complete: bool
    strictly_convex: bool
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.primitive and self.smooth and self.complete and self.strictly_convex


def validate_fan(fan: Fan, psi: Sequence[int]) -> FanDiagnostics:
    """Check primitivity, smoothness, the completeness surrogate and convexity of ``psi``."""
    if len(psi) != fan.n_rays:
        raise FanError(f"support function has {len(psi)} values for {fan.n_rays} rays")
    failures: list[str] = []

    primitive = True
    for i, r in enumerate(fan.rays):
        if gcd(*r) != 1:
            primitive = False
            failures.append(f"ray {i} {r} is not primitive")

    smooth = True
    for cone in fan.max_cones:
        if abs(_det([fan.rays[i] for i in sorted(cone)])) != 1:
            smooth = False
            failures.append(f"cone {sorted(cone)} is not unimodular")

    complete = True
    walls = fan.walls()
    for wall, owners in walls.items():
        if len(owners) != 2:
            complete = False
            failures.append(f"wall {sorted(wall)} lies in {len(owners)} maximal cones")
            continue
        if not _opposite_sides(fan, wall, owners):
            complete = False
            failures.append(f"cones across wall {sorted(wall)} overlap")
    if not _connected(fan, walls):
        complete = False
        failures.append("cone adjacency graph is disconnected")

    convex = complete and smooth
    if convex:
        for wall, (a, b) in walls.items():
            for here, there in ((a, b), (b, a)):
                m = fan.cone_functional(fan.max_cones[here], psi)
                (opposite,) = fan.max_cones[there] - wall
                if not dot(m, fan.rays[opposite]) < psi[opposite]:
                    convex = False
                    failures.append(
                        f"psi not strictly convex across wall {sorted(wall)}")
                    break
            if not convex:
                break
    return FanDiagnostics(primitive, smooth, complete, convex, tuple(failures))


def _opposite_sides(fan: Fan, wall: frozenset[int], owners: list[int]) -> bool:
    n = fan.dim
    (ra,) = fan.max_cones[owners[0]] - wall
    (rb,) = fan.max_cones[owners[1]] - wall
    base = [fan.rays[i] for i in sorted(wall)]
    # sign of det(wall rays, x) tells the side of the wall hyperplane
    sa = _det(base + [fan.rays[ra]]) if n > 1 else fan.rays[ra][0]
    sb = _det(base + [fan.rays[rb]]) if n > 1 else fan.rays[rb][0]
    return sa * sb < 0


def _connected(fan: Fan, walls: dict[frozenset[int], list[int]]) -> bool:
    if not fan.max_cones:
        return False
    adj: dict[int, set[int]] = {i: set() for i in range(len(fan.max_cones))}
    for owners in walls.values():
        for a, b in combinations(owners, 2):
            adj[a].add(b)
            adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(fan.max_cones)


@dataclass(frozen=True)
class Polytope:
    """The polyhedron ``{u : <u, normal_i> <= bound_i}`` with its vertex list."""

    normals: tuple[IntVector, ...]
    bounds: tuple[int, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    feasible: bool
    bounded: bool

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    def constraints(self) -> list[lin.Constraint]:
        return [lin.le(a, b) for a, b in zip(self.normals, self.bounds)]

    def contains(self, u: Sequence) -> bool:
        return all(dot(u, a) <= b for a, b in zip(self.normals, self.bounds))

    def active(self, u: Sequence) -> frozenset[int]:
        return frozenset(i for i, (a, b) in enumerate(zip(self.normals, self.bounds))
                         if dot(u, a) == b)

    def is_simple(self) -> bool:
        return all(len(self.active(v)) == self.dim for v in self.vertices)


def polytope_from_support(fan: Fan, psi: Sequence[int]) -> Polytope:
    """Moment polytope of ``psi``: one inequality per ray, exact vertices."""
    normals = fan.rays
    bounds = tuple(int(c) for c in psi)
    cons = [lin.le(a, b) for a, b in zip(normals, bounds)]
    feasible = lin.feasible(cons, fan.dim)
    bounded = lin.is_bounded(cons, fan.dim)
    vertices: list[tuple[Fraction, ...]] = []
    if feasible:
        # Each maximal cone gives a candidate; for non-convex psi fall back to
        # every nonsingular n-subset of facets so the true vertices are found.
        subsets = [sorted(c) for c in fan.max_cones]
        subsets += [list(s) for s in combinations(range(fan.n_rays), fan.dim)
                    if sorted(s) not in subsets]
        for idx in subsets:
            x = lin.solve([normals[i] for i in idx], [bounds[i] for i in idx])
            if x is None or not lin.satisfies(x, cons) or x in vertices:
                continue
            vertices.append(x)
    return Polytope(normals, bounds, tuple(vertices), feasible, bounded)


def lattice_points(p: Polytope) -> list[IntVector]:
    if not p.feasible:
        return []
    if not p.bounded:
        raise ValueError("lattice_points needs a bounded polytope")
    n = p.dim
    lo = [floor(min(v[i] for v in p.vertices)) for i in range(n)]
    hi = [ceil(max(v[i] for v in p.vertices)) for i in range(n)]

    def scan(prefix: tuple[int, ...]):
        k = len(prefix)
        if k == n:
            if p.contains(prefix):
                yield prefix
            return
        for x in range(lo[k], hi[k] + 1):
            yield from scan(prefix + (x,))

    return list(scan(()))


@dataclass(frozen=True)
class Face:
    id: int
    dim: int
    active: frozenset[int]
    vertices: frozenset[int]


@dataclass(frozen=True)
class FacePoset:
    faces: tuple[Face, ...]
    ambient_dim: int

    def __len__(self) -> int:
        return len(self.faces)

    @cached_property
    def top(self) -> int:
        return max(self.faces, key=lambda f: f.dim).id

    def leq(self, a: int, b: int) -> bool:
        """Face ``a`` is contained in face ``b``."""
        return self.faces[a].vertices <= self.faces[b].vertices

    @cached_property
    def facets(self) -> dict[int, int]:
        """Ray index -> face id of the facet it cuts out."""
        d = self.faces[self.top].dim
        out = {}
        for f in self.faces:
            if f.dim == d - 1 and len(f.active) == 1:
                (ray,) = f.active
                out[ray] = f.id
        return out

    def by_dim(self, k: int) -> list[int]:
        return [f.id for f in self.faces if f.dim == k]


def _affine_dim(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    base = points[0]
    return lin.rank([[x - y for x, y in zip(p, base)] for p in points[1:]])


def face_poset(p: Polytope) -> FacePoset:
    """Face lattice of ``p``; face ids follow the total order (dimension first)."""
    if not p.feasible or not p.vertices:
        raise EmptyPolytopeError("no face poset for an empty polytope")
    vertex_active = [p.active(v) for v in p.vertices]
    found: dict[frozenset[int], frozenset[int]] = {}
    frontier = {a for a in vertex_active}
    closed: set[frozenset[int]] = set()
    while frontier:
        closed |= frontier
        nxt = set()
        for a, b in combinations(sorted(closed, key=sorted), 2):
            c = a & b
            if c not in closed:
                nxt.add(c)
        frontier = nxt
    closed.add(frozenset())
    for act in closed:
        verts = frozenset(i for i, va in enumerate(vertex_active) if act <= va)
        # the face is determined by its vertex set; keep its full active set
        full = frozenset.intersection(*(vertex_active[i] for i in verts)) if verts else act
        found[full] = verts
    raw = [(_affine_dim([p.vertices[i] for i in sorted(v)]), tuple(sorted(v)), a)
           for a, v in found.items()]
    raw.sort(key=lambda t: (t[0], t[1]))
    faces = tuple(Face(i, d, a, frozenset(v)) for i, (d, v, a) in enumerate(raw))
    return FacePoset(faces, p.dim)


@dataclass(frozen=True)
class BoundaryPattern:
    """Facet-wise integer values of a boundary function and their sign pattern."""

    values: tuple[int, ...]

    @property
    def positive(self) -> frozenset[int]:
        return frozenset(i for i, h in enumerate(self.values) if h > 0)

    @property
    def signs(self) -> tuple[bool, ...]:
        return tuple(h > 0 for h in self.values)

    def __add__(self, other: "BoundaryPattern") -> "BoundaryPattern":
        return BoundaryPattern(tuple(a + b for a, b in zip(self.values, other.values)))


def h_function(fan: Fan, L: Sequence[int], u: Sequence[int]) -> BoundaryPattern:
    if len(L) != fan.n_rays or len(u) != fan.dim:
        raise ValueError("bundle and weight must match the fan")
    return BoundaryPattern(tuple(sum(map(mul, u, r)) - c for r, c in zip(fan.rays, L)))


def bundle_difference(L1: Sequence[int], L0: Sequence[int]) -> tuple[int, ...]:
    return tuple(map(sub, L1, L0))


@dataclass(frozen=True)
class ToricVariety:
    """A smooth complete fan together with a strictly convex support function.

    ``psi`` only fixes the combinatorial polytope ``Q`` whose faces index the
    covers; line bundles are passed around separately as coefficient tuples.
    """

    fan: Fan
    psi: tuple[int, ...]
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        diag = validate_fan(self.fan, self.psi)
        if not diag.ok:
            raise FanError("; ".join(diag.failures))

    @property
    def dim(self) -> int:
        return self.fan.dim

    @property
    def n_rays(self) -> int:
        return self.fan.n_rays

    @cached_property
    def polytope(self) -> Polytope:
        return polytope_from_support(self.fan, self.psi)

    @cached_property
    def poset(self) -> FacePoset:
        return face_poset(self.polytope)

    def vertex_cone(self, face_id: int) -> frozenset[int]:
        """Rays active at a vertex of Q, i.e. its dual maximal cone."""
        f = self.poset.faces[face_id]
        if f.dim != 0:
            raise ValueError(f"face {face_id} is not a vertex")
        return f.active

    def h(self, L: Sequence[int], u: Sequence[int]) -> BoundaryPattern:
        return h_function(self.fan, L, u)


def load_fan(path: str | Path) -> tuple[Fan, tuple[int, ...]]:
    """Read the JSON fan file; returns the fan and its ``psi``."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FanError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return fan_from_dict(data, source=str(path))


def fan_from_dict(data: dict, source: str = "<fan>") -> tuple[Fan, tuple[int, ...]]:
    for key in ("dim", "rays", "max_cones", "psi"):
        if key not in data:
            raise FanError(f"{source}: missing key {key!r}")

    def ints(xs, what):
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in xs):
            raise FanError(f"{source}: {what} must contain integers only")
        return tuple(xs)

    rays = tuple(ints(r, "rays") for r in data["rays"])
    cones = tuple(frozenset(ints(c, "max_cones")) for c in data["max_cones"])
    psi = ints(data["psi"], "psi")
    dim = data["dim"]
    if not isinstance(dim, int) or any(len(r) != dim for r in rays):
        raise FanError(f"{source}: rays must all have length dim={dim}")
    return Fan(dim, rays, cones), psi


def fan_to_dict(fan: Fan, psi: Sequence[int]) -> dict:
    return {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [sorted(c) for c in fan.max_cones],
        "psi": list(psi),
    }

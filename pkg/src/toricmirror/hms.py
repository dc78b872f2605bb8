"""Dictionary between line bundles and tropical sections, and the model check.

``compare_models`` witnesses the equivalence between the Cech model and the
simplicial model by checking that both build literally the same based
complexes and the same products once generators are matched by their chain.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from operator import add
from typing import Callable, Optional, Sequence

from . import cech, simp
from . import _linear as lin
from .chains import ChainMap, FreeComplex, cone_acyclic, verify_chain_map
from .lattice import ToricVariety, bundle_difference, dot

IntVec = tuple[int, ...]


class SectionError(ValueError):
    pass


# --- objects ---------------------------------------------------------------------

@dataclass(frozen=True)
class SectionData:
    """Lift ``m_v`` of the tropical section at each vertex (face id) of ``Q``."""

    lifts: dict[int, IntVec]

    def shifted(self, m: Sequence[int]) -> "SectionData":
        return SectionData({v: tuple(a + b for a, b in zip(x, m)) for v, x in self.lifts.items()})


def _vertices(X: ToricVariety) -> list[int]:
    return X.poset.by_dim(0)


def bundle_to_sections(X: ToricVariety, L: Sequence[int]) -> SectionData:
    if len(L) != X.n_rays:
        raise ValueError("bundle coefficients must match the rays")
    out = {}
    for v in _vertices(X):
        cone = sorted(X.vertex_cone(v))
        sol = lin.solve([X.fan.rays[r] for r in cone], [L[r] for r in cone])
        if sol is None or any(x.denominator != 1 for x in sol):
            raise SectionError(f"no integral lift at vertex {v}")
        out[v] = tuple(int(x) for x in sol)
    return SectionData(out)


def _primitive(vec: Sequence[Fraction]) -> IntVec:
    den = 1
    for x in vec:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def edges(X: ToricVariety) -> list[tuple[int, int, int]]:
    """``(edge face id, vertex id, vertex id)`` for every edge of ``Q``."""
    fp = X.poset
    verts = {frozenset(fp.faces[v].vertices): v for v in fp.by_dim(0)}
    out = []
    for e in fp.by_dim(1):
        ends = sorted(verts[frozenset({i})] for i in fp.faces[e].vertices)
        out.append((e, ends[0], ends[1]))
    return out


def check_sections(X: ToricVariety, s: SectionData) -> None:
    vertices = X.polytope.vertices
    fp = X.poset
    missing = set(_vertices(X)) - set(s.lifts)
    if missing:
        raise SectionError(f"no lift given for vertices {sorted(missing)}")
    for e, v, w in edges(X):
        (pv,) = fp.faces[v].vertices
        (pw,) = fp.faces[w].vertices
        direction = _primitive([a - b for a, b in zip(vertices[pv], vertices[pw])])
        diff = [a - b for a, b in zip(s.lifts[v], s.lifts[w])]
        k = next((Fraction(d, t) for d, t in zip(diff, direction) if t), Fraction(0))
        if k.denominator != 1 or any(d != k * t for d, t in zip(diff, direction)):
            raise SectionError(
                f"edge {e} between vertices {v} and {w}: lift difference {tuple(diff)} "
                f"is not an integer multiple of {direction}")


def sections_to_bundle(X: ToricVariety, s: SectionData) -> IntVec:
    check_sections(X, s)
    c: dict[int, int] = {}
    for v in _vertices(X):
        for r in X.vertex_cone(v):
            val = dot(s.lifts[v], X.fan.rays[r])
            if c.setdefault(r, val) != val:
                raise SectionError(f"ray {r} gets inconsistent values at vertex {v}")
    return tuple(c[r] for r in range(X.n_rays))


def linear_shift(X: ToricVariety, L: Sequence[int], L2: Sequence[int]) -> Optional[IntVec]:
    """``m`` with ``L2 - L = <m, v_rho>`` for every ray, or None."""
    diff = bundle_difference(L2, L)
    rays = X.fan.rays
    basis = sorted(X.vertex_cone(_vertices(X)[0]))
    m = lin.solve([rays[r] for r in basis], [diff[r] for r in basis])
    if m is None or any(x.denominator != 1 for x in m):
        return None
    if any(dot(m, ray) != d for ray, d in zip(rays, diff)):
        return None
    return tuple(int(x) for x in m)


# --- model comparison ----------------------------------------------------------------

@dataclass
class ModelReport:
    status: str = "exact"
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def fail(self, msg: str) -> "ModelReport":
        if self.exact:
            self.status = msg
        return self

    def bump(self, key: str, n: int = 1) -> None:
        self.checked[key] = self.checked.get(key, 0) + n


def _labelled(cx: FreeComplex) -> list[dict]:
    out = []
    for k, m in enumerate(cx.d):
        rows = cx.basis[k + 1] if k + 1 < len(cx.basis) else ()
        cols = cx.basis[k]
        out.append({(rows[i], cols[j]): v for (i, j), v in m.items()})
    return out


class ModelComparator:
    """Caches comparisons per boundary sign pattern; both sides only see patterns."""

    def __init__(self, X: ToricVariety):
        self.X = X
        self.cm = cech.model(X)
        self.sm = simp.simp_model(X)
        self._complex: dict[frozenset[int], Optional[str]] = {}
        self._cup: dict[tuple, Optional[str]] = {}

    def compare_pattern(self, positive: frozenset[int]) -> Optional[str]:
        if positive in self._complex:
            return self._complex[positive]
        a = self.cm.complex(positive)
        b = self.sm.complex(positive)
        msg = None
        sa = [set(level) for level in a.basis]
        sb = [set(level) for level in b.basis]
        if sa != sb:
            k = next(i for i in range(max(len(sa), len(sb)))
                     if (sa[i] if i < len(sa) else set()) != (sb[i] if i < len(sb) else set()))
            msg = f"kill sets differ in degree {k} for pattern {sorted(positive)}"
        else:
            la, lb = _labelled(a), _labelled(b)
            for k, (x, y) in enumerate(zip(la, lb)):
                if x != y:
                    key = sorted(set(x.items()) ^ set(y.items()))[0]
                    msg = f"differentials differ in degree {k} at {key[0]} for pattern {sorted(positive)}"
                    break
        self._complex[positive] = msg
        return msg

    def compare_cup(self, L0, L1, L2, u, u2, patterns=None) -> tuple[Optional[str], int]:
        """Structure constants of both products; ``patterns`` may carry the
        precomputed ``(p01, p12, p02)``."""
        X = self.X
        if patterns is None:
            tot = tuple(a + b for a, b in zip(u, u2))
            patterns = (self.sm.positive(L0, L1, u), self.sm.positive(L1, L2, u2),
                        self.sm.positive(L0, L2, tot))
        key = p01, p12, p02 = patterns
        if key in self._cup:
            return self._cup[key], 0
        gens01 = [c for level in self.cm.complex(p01).basis for c in level]
        gens12 = [c for level in self.cm.complex(p12).basis for c in level]
        msg, n = None, 0
        for g in gens01:
            psi_c = cech.generator(X, L0, L1, u, g)
            psi_s = simp.simp_hom(X, L0, L1, u, len(g) - 1, {g: 1})
            for h in gens12:
                phi_c = cech.generator(X, L1, L2, u2, h)
                phi_s = simp.simp_hom(X, L1, L2, u2, len(h) - 1, {h: 1})
                a = cech.cech_cup(phi_c, psi_c).nonzero()
                b = simp.compose(phi_s, psi_s).nonzero()
                n += 1
                if a != b:
                    msg = f"cup constants differ for {h} o {g}: {a} vs {b}"
                    break
            if msg:
                break
        self._cup[key] = msg
        return msg, n


_COMPARATORS: dict[int, tuple[ToricVariety, ModelComparator]] = {}


def comparator(X: ToricVariety) -> ModelComparator:
    hit = _COMPARATORS.get(id(X))
    if hit is None or hit[0] is not X:
        hit = (X, ModelComparator(X))
        _COMPARATORS[id(X)] = hit
    return hit[1]


def compare_models(X: ToricVariety, L0: Sequence[int], L1: Sequence[int], u: Sequence[int],
                   L2: Optional[Sequence[int]] = None, u2: Optional[Sequence[int]] = None,
                   report: Optional[ModelReport] = None) -> ModelReport:
    """Compare kill sets and differentials at ``(L0, L1, u)`` and products into ``L2``.

    Without ``L2`` the product is taken with ``Hom(L1, L1)_0``.
    """
    rep = report or ModelReport()
    cmp = comparator(X)
    L0, L1, u = tuple(L0), tuple(L1), tuple(u)
    p01 = cmp.sm.positive(L0, L1, u)
    if cech.pattern(X, L0, L1, u).positive != p01:
        return rep.fail("boundary patterns disagree")
    if L2 is None and u2 is None:
        # Hom(L1, L1)_0 has no positive facets and composing with it keeps p01
        L2, u2 = L1, (0,) * len(u)
        pats = (p01, frozenset(), p01)
    else:
        L2 = tuple(L2) if L2 is not None else L1
        u2 = tuple(u2) if u2 is not None else (0,) * len(u)
        pats = (p01, cmp.sm.positive(L1, L2, u2),
                cmp.sm.positive(L0, L2, tuple(map(add, u, u2))))
    for pat in pats:
        msg = cmp.compare_pattern(pat)
        rep.bump("complexes")
        if msg:
            return rep.fail(msg)
    msg, n = cmp.compare_cup(L0, L1, L2, u, u2, pats)
    rep.bump("cup pairs", n)
    if msg:
        return rep.fail(msg)
    return rep


def _normal_form(X: ToricVariety, D: Sequence[int]) -> tuple[IntVec, IntVec]:
    """Split ``D = D' + <m, .>`` with ``D'`` vanishing on the first vertex cone."""
    cone = sorted(X.vertex_cone(_vertices(X)[0]))
    m = lin.solve([X.fan.rays[r] for r in cone], [D[r] for r in cone])
    m = tuple(int(x) for x in m)  # unimodular cone, so integral
    return tuple(d - dot(m, ray) for d, ray in zip(D, X.fan.rays)), m


_WEIGHTS: dict[tuple[int, IntVec], tuple[ToricVariety, list[IntVec]]] = {}


def certified_weights(X: ToricVariety, L0, L1) -> list[IntVec]:
    """Weights with nonzero cohomology, from the chamber certificate.

    Shifting ``L1`` by a character ``m`` shifts every weight by ``m``, so one
    chamber analysis per linear-equivalence class suffices.
    """
    D0, m = _normal_form(X, bundle_difference(L1, L0))
    key = (id(X), D0)
    hit = _WEIGHTS.get(key)
    if hit is None or hit[0] is not X:
        hit = (X, cech.graded_hom(X, (0,) * X.n_rays, D0).weights())
        _WEIGHTS[key] = hit
    return [tuple(a + b for a, b in zip(u, m)) for u in hit[1]]


# --- DG axioms ----------------------------------------------------------------------

@dataclass
class AxiomReport:
    passed: dict[str, int] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)
    first_failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.failed

    def record(self, axiom: str, ok: bool, where: str = "") -> None:
        bucket = self.passed if ok else self.failed
        bucket[axiom] = bucket.get(axiom, 0) + 1
        if not ok and self.first_failure is None:
            self.first_failure = f"{axiom}: {where}"


AXIOMS = ("d^2=0", "leibniz", "associativity", "unit", "unit quasi-iso")


def _rand_bundle(X, rng, lo=-3, hi=3):
    return tuple(rng.randint(lo, hi) for _ in range(X.n_rays))


def _rand_weight(X, rng, box=2):
    return tuple(rng.randint(-box, box) for _ in range(X.dim))


def _rand_cochain(X, L0, L1, u, rng):
    cx = cech.cech_complex(X, L0, L1, u)
    degs = [k for k in range(len(cx.basis)) if cx.basis[k]]
    k = rng.choice(degs)
    return cech.random_cochain(X, L0, L1, u, k, rng)


def _locate(a: cech.Cochain, b: cech.Cochain) -> str:
    x, y = a.nonzero(), b.nonzero()
    bad = sorted(c for c in set(x) | set(y) if x.get(c, 0) != y.get(c, 0))
    return f"chain {bad[0]}" if bad else "degree mismatch"


def _unit_map(X, L0, L1, u, cup) -> ChainMap:
    cx = cech.cech_complex(X, L0, L1, u)
    e = cech.unit(X, L1)
    maps = {}
    for k, level in enumerate(cx.basis):
        idx = {c: i for i, c in enumerate(level)}
        m = {}
        for j, c in enumerate(level):
            img = cup(e, cech.generator(X, L0, L1, u, c))
            for c2, v in img.nonzero().items():
                m[(idx[c2], j)] = v
        maps[k] = m
    return ChainMap(cx, cx, maps)


def dg_axioms_check(varieties: Sequence[ToricVariety], samples: int, seed: int = 0,
                    differential: Optional[Callable] = None,
                    cup: Optional[Callable] = None,
                    degenerate: bool = False) -> AxiomReport:
    """Randomized d^2, Leibniz, associativity and unit checks on the Cech model.

    ``differential`` and ``cup`` default to the library operations; passing
    replacements lets tests confirm that corrupted signs are caught.
    """
    d = differential or cech.differential
    mul = cup or cech.cech_cup
    rng = random.Random(seed)
    rep = AxiomReport()
    for it in range(samples):
        X = varieties[it % len(varieties)]
        if degenerate:
            L = _rand_bundle(X, rng)
            L0 = L1 = L2 = L
        else:
            L0, L1, L2 = (_rand_bundle(X, rng) for _ in range(3))
        u, u2, u3 = (_rand_weight(X, rng) for _ in range(3))
        where = f"{X.name} L={L0},{L1},{L2} u={u},{u2},{u3}"
        psi = _rand_cochain(X, L0, L1, u, rng)
        phi = _rand_cochain(X, L1, L2, u2, rng)
        chi = _rand_cochain(X, L2, L0, u3, rng)

        dd = d(d(psi))
        rep.record("d^2=0", dd.is_zero, where)

        lhs = d(mul(phi, psi))
        sign = -1 if phi.degree % 2 else 1
        rhs = mul(d(phi), psi) + mul(phi, d(psi)).scale(sign)
        rep.record("leibniz", lhs == rhs, f"{where} {_locate(lhs, rhs)}")

        a = mul(mul(chi, phi), psi)
        b = mul(chi, mul(phi, psi))
        rep.record("associativity", a == b, f"{where} {_locate(a, b)}")

        e0, e1 = cech.unit(X, L0), cech.unit(X, L1)
        ok = d(e1).is_zero and mul(e1, psi) == psi and mul(psi, e0) == psi
        rep.record("unit", ok, where)

        f = _unit_map(X, L0, L1, u, mul)
        rep.record("unit quasi-iso", bool(verify_chain_map(f)) and cone_acyclic(f), where)
    return rep

import random
from itertools import product
from math import comb

import pytest

from toricmirror import cech
from toricmirror.catalog import CATALOG, hirzebruch, p1, p1xp1, p2, projective_space
from toricmirror.cech import (
    CompositionError, InconsistencyError, basis, cech_complex, cech_cup, differential,
    euler_characteristic, generator, graded_hom, model, random_cochain, unit, zero_cochain,
)
from toricmirror.chains import CohomologyResult, cohomology, verify_complex
from toricmirror.lattice import lattice_points, polytope_from_support

from .oracles import betti_over_q, nested_chains_by_subsets

O1 = (0, 0)


@pytest.mark.parametrize("make,counts", [(p1, [3, 2]), (p2, [7, 12, 6]), (p1xp1, [9, 16, 8])])
def test_chain_counts(make, counts):
    X = make()
    assert [len(level) for level in model(X).chains] == counts
    assert nested_chains_by_subsets(X.poset) == counts


def test_chain_counts_p3_and_hirzebruch():
    for X in (projective_space(3), hirzebruch(2)):
        assert [len(l) for l in model(X).chains] == nested_chains_by_subsets(X.poset)


def test_p1_minus_two():
    X = p1()
    c = cech_complex(X, (0, 0), (-1, -1), (0,))
    assert [c.rank(k) for k in c.degrees] == [1, 2]
    r = cohomology(c)
    assert (r.rank(0), r.rank(1)) == (0, 1)


def test_empty_plus_is_full_and_contractible():
    for make in (p1, p2, p1xp1):
        X = make()
        c = cech_complex(X, (0,) * X.n_rays, (0,) * X.n_rays, (0,) * X.dim)
        assert [c.rank(k) for k in c.degrees] == [len(l) for l in model(X).chains]
        r = cohomology(c)
        assert r.rank(0) == 1 and r.nonzero_degrees() == [0]


def test_p2_minus_three():
    X = p2()
    c = cech_complex(X, (0, 0, 0), (-1, -1, -1), (0, 0))
    assert sum(c.rank(k) for k in c.degrees) == 25 - 12
    r = cohomology(c)
    assert r.ranks == (0, 0, 1)


def test_killed_chains_exactly_those_inside_plus():
    X = p2()
    m = model(X)
    pos = frozenset({0, 1, 2})
    kept = set(cech_complex(X, (0, 0, 0), (-1, -1, -1), (0, 0)).basis[0])
    proper = {(f.id,) for f in X.poset.faces if f.id != X.poset.top}
    assert kept == {(X.poset.top,)}
    assert all(not m.admissible(c, pos) for c in proper)


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "F1", "P3"])
def test_every_pattern_is_a_complex_with_q_ranks(name):
    X = CATALOG[name]()
    m = model(X)
    for bits in product((False, True), repeat=X.n_rays):
        pos = frozenset(i for i, b in enumerate(bits) if b)
        cx = m.complex(pos)
        assert verify_complex(cx)
        assert list(m.cohomology(pos).ranks) == betti_over_q(cx)


# --- cochains and products ----------------------------------------------------------

def test_cup_p1_sections():
    X = p1()
    L0, L1, L2 = (0, 0), (1, 0), (2, 0)
    s = cech.Cochain(X, L0, L1, (0,), 0, {c: 1 for c in basis(X, L0, L1, (0,), 0)})
    t = cech.Cochain(X, L1, L2, (1,), 0, {c: 1 for c in basis(X, L1, L2, (1,), 0)})
    assert differential(s).is_zero and differential(t).is_zero
    prod = cech_cup(t, s)
    assert prod.weight == (1,) and (prod.source, prod.target) == (L0, L2)
    gen = {c: 1 for c in basis(X, L0, L2, (1,), 0)}
    assert prod.nonzero() == gen
    assert differential(prod).is_zero


def test_cup_nonmatching_faces_is_zero():
    X = p2()
    a = generator(X, O1 + (0,), O1 + (0,), (0, 0), (0,))
    b = generator(X, O1 + (0,), O1 + (0,), (0, 0), (1,))
    assert cech_cup(b, a).is_zero
    assert cech_cup(a, a).nonzero() == {(0,): 1}


def test_cup_requires_composable():
    X = p1()
    a = zero_cochain(X, (0, 0), (1, 0), (0,), 0)
    with pytest.raises(CompositionError):
        cech_cup(a, a)


def test_generator_rejects_killed_chain():
    X = p1()
    with pytest.raises(ValueError, match="killed"):
        generator(X, (0, 0), (-1, -1), (0,), (0,))


def _random_triple(X, rng):
    r = X.n_rays
    Ls = [tuple(rng.randint(-2, 2) for _ in range(r)) for _ in range(3)]
    us = [tuple(rng.randint(-2, 2) for _ in range(X.dim)) for _ in range(3)]
    return Ls, us


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "F1"])
def test_leibniz_associativity_unit(name):
    X = CATALOG[name]()
    rng = random.Random(name)
    for _ in range(40):
        (L0, L1, L2), (u, v, w) = _random_triple(X, rng)
        L3 = tuple(rng.randint(-2, 2) for _ in range(X.n_rays))
        a = random_cochain(X, L0, L1, u, rng.randint(0, X.dim), rng)
        b = random_cochain(X, L1, L2, v, rng.randint(0, X.dim), rng)
        c = random_cochain(X, L2, L3, w, rng.randint(0, X.dim), rng)
        assert differential(differential(a)).is_zero
        sign = -1 if b.degree % 2 else 1
        assert differential(cech_cup(b, a)) == cech_cup(differential(b), a) + cech_cup(b, differential(a)).scale(sign)
        assert cech_cup(c, cech_cup(b, a)) == cech_cup(cech_cup(c, b), a)
        assert cech_cup(unit(X, L1), a) == a
        assert cech_cup(a, unit(X, L0)) == a


def test_unit_is_cocycle():
    X = p1xp1()
    e = unit(X, (1, 0, 2, 0))
    assert differential(e).is_zero


# --- graded Hom --------------------------------------------------------------------

def test_p1_hom_o_o2():
    g = graded_hom(p1(), (0, 0), (1, 1))
    assert g.weights(0) == [(-1,), (0,), (1,)]
    assert g.weights(1) == []
    assert g.table() == [((u,), 0, 1, ()) for u in (-1, 0, 1)]
    # the asymmetric representative of O(2) is a translate
    assert graded_hom(p1(), (0, 0), (2, 0)).weights(0) == [(0,), (1,), (2,)]


def test_p2_hom_o_o_minus_three():
    g = graded_hom(p2(), (0, 0, 0), (-1, -1, -1))
    assert g.weights() == [(0, 0)]
    assert g.pieces[(0, 0)].ranks == (0, 0, 1)


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "F1"])
def test_hom_l_l(name):
    X = CATALOG[name]()
    L = tuple(range(X.n_rays))
    g = graded_hom(X, L, L)
    zero = (0,) * X.dim
    assert g.weights() == [zero] and g.pieces[zero].ranks[0] == 1 and g.pieces[zero].euler == 1


def test_euler_examples():
    assert euler_characteristic(p2(), (0, 0, 0), (1, 0, 0)) == 3
    assert euler_characteristic(p1(), (0, 0), (-1, -1)) == -1
    assert euler_characteristic(p2(), (0, 0, 0), (0, 0, 0)) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bott_formula_projective_space(n):
    X = projective_space(n)
    zero = (0,) * (n + 1)
    for d in range(-n - 3, 4):
        g = graded_hom(X, zero, (d,) + (0,) * n)
        h0 = comb(n + d, n) if d >= 0 else 0
        hn = comb(-d - 1, n) if d <= -n - 1 else 0
        assert g.total_rank(0) == h0
        assert g.total_rank(n) == hn
        assert all(g.total_rank(k) == 0 for k in range(1, n))


@pytest.mark.parametrize("name,L", [("P1xP1", (1, -3, 0, 0)), ("F1", (-2, 1, 0, -1)),
                                    ("P2", (2, -1, 0)), ("F2", (0, 0, -3, 1))])
def test_graded_hom_matches_box_scan(name, L):
    X = CATALOG[name]()
    zero = (0,) * X.n_rays
    g = graded_hom(X, zero, L)
    box = range(-7, 8)
    for u in product(box, repeat=X.dim):
        r = cohomology(cech_complex(X, zero, L, u))
        if u in g.pieces:
            assert g.pieces[u] == r
        else:
            assert r.is_zero, u
    assert all(max(abs(x) for x in u) < 7 for u in g.pieces)


def _p1_groups(a):
    return (a + 1 if a >= 0 else 0, -a - 1 if a <= -2 else 0)


@pytest.mark.parametrize("a,b", [(1, -3), (-2, -2), (2, 0), (-4, 1), (0, -1)])
def test_kunneth_on_p1xp1(a, b):
    g = graded_hom(p1xp1(), (0,) * 4, (a, b, 0, 0))
    x0, x1 = _p1_groups(a)
    y0, y1 = _p1_groups(b)
    assert [g.total_rank(k) for k in range(3)] == [x0 * y0, x0 * y1 + x1 * y0, x1 * y1]


def test_certificate_covers_all_patterns():
    X = p1xp1()
    g = graded_hom(X, (0,) * 4, (2, 1, 0, 0))
    assert len(g.certificate) == 2 ** 4
    assert sum(rec.points for rec in g.certificate) == len(g.pieces)
    for rec in g.certificate:
        if rec.nonzero and rec.feasible:
            assert rec.bounded


def test_unbounded_nonzero_chamber_raises(monkeypatch):
    X = p1()
    m = model(X)
    fake = CohomologyResult(0, (1, 0), ((), ()))
    monkeypatch.setattr(m, "cohomology", lambda positive: fake)
    with pytest.raises(InconsistencyError):
        graded_hom(X, (0, 0), (0, 0))


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "F1"])
def test_euler_equals_lattice_count_for_ample(name):
    from toricmirror.lattice import validate_fan
    X = CATALOG[name]()
    rng = random.Random(7)
    zero = (0,) * X.n_rays
    tried = 0
    while tried < 6:
        L = tuple(rng.randint(0, 3) for _ in range(X.n_rays))
        if not validate_fan(X.fan, L).strictly_convex:
            continue
        tried += 1
        g = graded_hom(X, zero, L)
        assert g.euler == len(lattice_points(polytope_from_support(X.fan, L)))
        assert g.total_rank(0) == g.euler

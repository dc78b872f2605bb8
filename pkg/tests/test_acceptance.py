"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import random
import time
from itertools import product

import pytest

from toricmirror import cech, simp
from toricmirror.catalog import hirzebruch, iterated_blowup, p1, p1xp1, p2
from toricmirror.chains import smith_normal_form
from toricmirror.hms import (
    ModelReport, _normal_form, certified_weights, compare_models, dg_axioms_check,
)
from toricmirror.lattice import lattice_points, polytope_from_support, validate_fan
from toricmirror.tropical import fano_diagnostic, mirror_polynomial, regions
from toricmirror.trees import (
    catalan, check_balance, enumerate_ribbon_trees, label_edges, stasheff_facets,
    wall_crossing_check,
)

from .oracles import pi_intersection_dimension, sympy_divisors

ACCEPTANCE_FANS = (p1, p2, p1xp1, lambda: hirzebruch(1))


@pytest.fixture
def announce(capsys):
    def emit(n, ok, elapsed, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {detail}")
    return emit


def _zero(X):
    return (0,) * X.n_rays


def _tested_differences():
    """Every bundle difference L1 - L0 exercised by criteria 1-3."""
    X = p1()
    yield X, [(d, 0) for d in range(-6, 7)]
    X = p2()
    yield X, [(d, 0, 0) for d in range(-6, 7)]
    for make in ACCEPTANCE_FANS:
        X = make()
        yield X, list(product(range(-6, 7), repeat=X.n_rays))


def test_criterion_1_p1_ladder(announce):
    t = time.perf_counter()
    X = p1()
    bad = []
    for d in range(0, 7):
        g = cech.graded_hom(X, (0, 0), (d, 0))
        if g.total_rank(0) != d + 1 or g.total_rank(1) != 0:
            bad.append(f"O({d})")
    for d in range(2, 7):
        g = cech.graded_hom(X, (0, 0), (-d, 0))
        if g.total_rank(1) != d - 1 or g.total_rank(0) != 0:
            bad.append(f"O(-{d})")
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 1
    announce(1, ok, elapsed, f"wrong: {bad}" if bad else "13 line bundles")
    assert not bad and elapsed < 1


def test_criterion_2_p2_table(announce):
    t = time.perf_counter()
    X = p2()
    bad = []
    for d in range(-6, 7):
        g = cech.graded_hom(X, (0, 0, 0), (d, 0, 0))
        if 0 <= d <= 5 and g.total_rank(0) != (d + 1) * (d + 2) // 2:
            bad.append(f"H0 O({d})")
        if -5 <= d <= 5 and g.total_rank(1) != 0:
            bad.append(f"H1 O({d})")
        if d <= -3 and g.total_rank(2) != (-d - 1) * (-d - 2) // 2:
            bad.append(f"H2 O({d})")
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 5
    announce(2, ok, elapsed, f"wrong: {bad}" if bad else "H0, H1, H2 tables")
    assert not bad and elapsed < 5


def test_criterion_3_model_equality(announce):
    # Both models depend on (L0, L1) only through D = L1 - L0, so coefficient
    # pairs in [-3, 3] cover exactly the differences D in [-6, 6].
    t = time.perf_counter()
    rng = random.Random(2024)
    counts, failures = {}, []
    for X in (make() for make in ACCEPTANCE_FANS):
        zero, r = _zero(X), X.n_rays
        rep = ModelReport()
        n = 0
        for D in product(range(-6, 7), repeat=r):
            for u in certified_weights(X, zero, D):
                compare_models(X, zero, D, u, report=rep)
                n += 1
        # literal pairs with nonzero L0, and products into a third bundle
        for _ in range(300):
            L0 = tuple(rng.randint(-3, 3) for _ in range(r))
            L1 = tuple(rng.randint(-3, 3) for _ in range(r))
            L2 = tuple(rng.randint(-3, 3) for _ in range(r))
            w01, w12 = certified_weights(X, L0, L1), certified_weights(X, L1, L2)
            for u in rng.sample(w01, min(3, len(w01))):
                compare_models(X, L0, L1, u, report=rep)
                for u2 in rng.sample(w12, min(3, len(w12))):
                    compare_models(X, L0, L1, u, L2=L2, u2=u2, report=rep)
                    n += 1
        counts[X.name] = n
        if not rep.exact:
            failures.append(f"{X.name}: {rep.status}")
    elapsed = time.perf_counter() - t
    ok = not failures and elapsed < 60
    announce(3, ok, elapsed, "; ".join(failures) or f"exact on {counts}")
    assert not failures and elapsed < 60


def test_criterion_4_dg_axioms(announce):
    t = time.perf_counter()
    rep = dg_axioms_check([make() for make in ACCEPTANCE_FANS], 500, seed=2024)
    elapsed = time.perf_counter() - t
    complete = all(rep.passed.get(a, 0) == 500 for a in rep.passed) and len(rep.passed) == 5
    ok = rep.ok and complete and elapsed < 60
    announce(4, ok, elapsed, rep.first_failure or f"500 instances, {sorted(rep.passed)}")
    assert ok, rep.first_failure


def test_criterion_5_local_model(announce):
    t = time.perf_counter()
    problems = []
    for d in range(4):
        msg = simp.square_discrepancy(simp.standard_simplex(d))
        if msg:
            problems.append(f"square Delta^{d}: {msg}")
    for d in range(1, 5):
        msg = simp.trichotomy_discrepancy(d)
        if msg:
            problems.append(f"trichotomy Delta^{d}: {msg}")
    # outcomes against the geometric intersection of the two dual cell copies
    for d in range(1, 4):
        faces = [s for level in simp.standard_simplex(d).simplices for s in level]
        for s, tt in product(faces, faces):
            res = simp.pi_intersect_collapse(simp.PiModelCell(d, s),
                                             simp.PiModelCell(d, tt, simp.Copy.SHIFTED))
            empty = pi_intersection_dimension(s, tt, d) < 0
            if empty != (res.outcome is simp.Outcome.EMPTY):
                problems.append(f"geometry d={d} {s} {tt}")
    elapsed = time.perf_counter() - t
    ok = not problems and elapsed < 5
    announce(5, ok, elapsed, problems[0] if problems else "square and trichotomy exact")
    assert not problems and elapsed < 5


def test_criterion_6_tropical(announce):
    t = time.perf_counter()
    X = p2()
    regs = [r for r in regions(mirror_polynomial(X.fan, (1, 1, 1))) if r.full_dim]
    n_bounded = sum(r.bounded for r in regs)
    rep = fano_diagnostic(X.fan, (1, 1, 1))
    blow = fano_diagnostic(iterated_blowup().fan, iterated_blowup().psi)
    elapsed = time.perf_counter() - t
    ok = (len(regs) == 4 and n_bounded == 1 and rep.c0_equals_polytope
          and not rep.extra_bounded and blow.extra_bounded and elapsed < 1)
    announce(6, ok, elapsed, f"P2 regions={len(regs)} bounded={n_bounded}; "
             f"Bl4P2: {blow.verdict}")
    assert ok


def test_criterion_7_trees(announce):
    t = time.perf_counter()
    problems = []
    for d in range(2, 9):
        if len(enumerate_ribbon_trees(d)) != catalan(d - 1):
            problems.append(f"catalan d={d}")
        if len(stasheff_facets(d)) != d * (d - 1) // 2 - 1:
            problems.append(f"facets d={d}")
    for d in range(3, 6):
        if not all(r.ok for r in wall_crossing_check(d)):
            problems.append(f"walls d={d}")
    for d in range(2, 7):
        if not all(check_balance(tr, label_edges(tr)) for tr in enumerate_ribbon_trees(d, False)):
            problems.append(f"balance d={d}")
    elapsed = time.perf_counter() - t
    ok = not problems and elapsed < 30
    announce(7, ok, elapsed, problems[0] if problems else "counts, walls and balance")
    assert not problems and elapsed < 30


def test_criterion_8_euler(announce):
    t = time.perf_counter()
    bad, total, classes = [], 0, 0
    for X, diffs in _tested_differences():
        reps = {}
        for D in diffs:
            if validate_fan(X.fan, D).strictly_convex:
                total += 1
                reps.setdefault(_normal_form(X, D)[0], D)
        # chi and the point count are both invariant under D -> D + <m, .>
        for D0, D in reps.items():
            chi = cech.euler_characteristic(X, _zero(X), D0)
            count = len(lattice_points(polytope_from_support(X.fan, D)))
            classes += 1
            if chi != count:
                bad.append(f"{X.name} {D}: chi={chi} points={count}")
    elapsed = time.perf_counter() - t
    announce(8, not bad, elapsed, bad[0] if bad else
             f"{total} ample differences in {classes} linear-equivalence classes")
    assert not bad


def test_criterion_9_snf_canary(announce):
    t = time.perf_counter()
    rnd = random.Random(12)
    m = [[rnd.randint(-3, 3) for _ in range(12)] for _ in range(12)]
    got = smith_normal_form(m).divisors
    want = sympy_divisors(m)
    elapsed = time.perf_counter() - t
    ok = got == want
    prod = 1
    for x in got:
        prod *= x
    announce(9, ok, elapsed, f"divisors {got}, product {prod}")
    assert ok

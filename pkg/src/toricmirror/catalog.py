"""Small library of smooth projective fans used by the tests and the CLI."""
from __future__ import annotations

from .lattice import Fan, ToricVariety


def projective_space(n: int) -> ToricVariety:
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return ToricVariety(Fan.from_lists(rays, cones), (1,) * (n + 1), f"P{n}")


def p1() -> ToricVariety:
    return projective_space(1)


def p2() -> ToricVariety:
    return projective_space(2)


def p1xp1() -> ToricVariety:
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    cones = [[0, 1], [1, 2], [2, 3], [3, 0]]
    return ToricVariety(Fan.from_lists(rays, cones), (1, 1, 1, 1), "P1xP1")


def hirzebruch(a: int) -> ToricVariety:
    """F_a with rays (1,0), (0,1), (-1,a), (0,-1)."""
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    cones = [[0, 1], [1, 2], [2, 3], [3, 0]]
    # convex: across ray 1 need c0 + c2 > a*c1; across ray 3 need c0 + c2 > -a*c3
    psi = (1, 1, a + 2, 1) if a >= 0 else (1, 1 - a, 1, 1)
    return ToricVariety(Fan.from_lists(rays, cones), psi, f"F{a}")


# Four successive blowups of P^2, each adding the sum of two adjacent rays.
# The ray (-1,-1) ends up strictly inside the convex hull of the others, so
# the mirror's tropical amoeba can have a second bounded region.
ITERATED_BLOWUP_RAYS = [(1, 0), (0, 1), (-1, 0), (-2, -1), (-3, -2), (-1, -1), (0, -1)]


def iterated_blowup(psi=(3, 4, 2, 1, 1, 1, 3)) -> ToricVariety:
    k = len(ITERATED_BLOWUP_RAYS)
    cones = [[i, (i + 1) % k] for i in range(k)]
    return ToricVariety(Fan.from_lists(ITERATED_BLOWUP_RAYS, cones), tuple(psi), "Bl4P2")


CATALOG = {
    "P1": p1,
    "P2": p2,
    "P3": lambda: projective_space(3),
    "P1xP1": p1xp1,
    "F1": lambda: hirzebruch(1),
    "F2": lambda: hirzebruch(2),
    "Bl4P2": iterated_blowup,
}

"""Deterministic SVG rendering of a planar tropical skeleton over a polytope.

The viewport is the bounding box of all skeleton and polytope vertices grown
by one unit on every side; rays and lines are clipped to it. Coordinates are
printed with four decimals so output is byte-stable.
"""
from __future__ import annotations

from fractions import Fraction
from math import atan2
from typing import Optional, Sequence

from .lattice import Polytope
from .tropical import Skeleton

SCALE = 40
STYLE = {
    "polytope": 'fill="#dde8f4" stroke="#34699a" stroke-width="1.5"',
    "edge": 'stroke="#b5312b" stroke-width="2"',
    "ray": 'stroke="#b5312b" stroke-width="2" stroke-dasharray="6 3"',
}


def _fmt(x) -> str:
    return f"{float(x):.4f}"


def _clip(p, direction, box, both: bool):
    """Parameter interval of ``p + t * direction`` inside ``box``."""
    lo, hi = (Fraction(-10 ** 9) if both else Fraction(0)), Fraction(10 ** 9)
    for k in range(2):
        dk = Fraction(direction[k])
        a, b = box[0][k], box[1][k]
        if dk == 0:
            if not a <= p[k] <= b:
                return None
            continue
        t1, t2 = (a - p[k]) / dk, (b - p[k]) / dk
        lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
    if lo > hi:
        return None
    return lo, hi


def _hull_order(points: Sequence[Sequence[Fraction]]) -> list:
    cx = sum(Fraction(p[0]) for p in points) / len(points)
    cy = sum(Fraction(p[1]) for p in points) / len(points)
    return sorted(points, key=lambda p: (atan2(float(p[1] - cy), float(p[0] - cx)), p))


def export_svg(skeleton: Optional[Skeleton], polytope: Optional[Polytope]) -> str:
    if polytope is not None and polytope.dim != 2:
        raise ValueError("SVG export needs a planar polytope")
    pts = []
    if skeleton is not None:
        pts += [tuple(Fraction(x) for x in v) for v in skeleton.vertices]
        pts += [tuple(Fraction(x) for x in p) for p, _, _ in skeleton.lines]
    if polytope is not None:
        pts += [tuple(Fraction(x) for x in v) for v in polytope.vertices]
    if not pts:
        pts = [(Fraction(0), Fraction(0))]
    box = ((min(p[0] for p in pts) - 1, min(p[1] for p in pts) - 1),
           (max(p[0] for p in pts) + 1, max(p[1] for p in pts) + 1))
    width = (box[1][0] - box[0][0]) * SCALE
    height = (box[1][1] - box[0][1]) * SCALE

    def sx(x):
        return _fmt((x - box[0][0]) * SCALE)

    def sy(y):
        return _fmt((box[1][1] - y) * SCALE)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
           f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">']
    if polytope is not None and polytope.vertices:
        ring = " ".join(f"{sx(p[0])},{sy(p[1])}" for p in _hull_order(polytope.vertices))
        out.append(f'  <polygon class="polytope" points="{ring}" {STYLE["polytope"]}/>')
    if skeleton is not None:
        for a, b, lab in skeleton.edges:
            out.append(f'  <line class="edge" data-label="{_label(lab)}" x1="{sx(a[0])}" y1="{sy(a[1])}" '
                       f'x2="{sx(b[0])}" y2="{sy(b[1])}" {STYLE["edge"]}/>')
        for kind, pieces, both in (("ray", skeleton.rays, False), ("line", skeleton.lines, True)):
            for p, direction, lab in pieces:
                p = tuple(Fraction(x) for x in p)
                span = _clip(p, direction, box, both)
                if span is None:
                    continue
                a = (p[0] + span[0] * direction[0], p[1] + span[0] * direction[1])
                b = (p[0] + span[1] * direction[0], p[1] + span[1] * direction[1])
                out.append(f'  <line class="{kind}" data-label="{_label(lab)}" x1="{sx(a[0])}" '
                           f'y1="{sy(a[1])}" x2="{sx(b[0])}" y2="{sy(b[1])}" {STYLE["ray"]}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _label(lab) -> str:
    a, b = lab
    return f"{list(a)}|{list(b)}".replace(" ", "")

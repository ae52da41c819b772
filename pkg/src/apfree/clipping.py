"""Exact convex polygon clipping against half-planes (Sutherland-Hodgman).

This is the independent area route: pieces are described as a bounding box
successively clipped by half-planes, never via stated vertex lists.  All
coordinates are Fractions; intersections are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Point2 = tuple[Fraction, Fraction]
HalfPlane = tuple[Fraction, Fraction, Fraction]  # (A, B, C): A*x + B*y <= C


def clip_halfplane(polygon: Sequence[Point2], hp: HalfPlane) -> list[Point2]:
    """Clip a convex polygon to {(x,y): A*x + B*y <= C}."""
    a, b, c = hp
    if not polygon:
        return []
    out: list[Point2] = []
    n = len(polygon)
    for k in range(n):
        px, py = polygon[k]
        qx, qy = polygon[(k + 1) % n]
        p_in = a * px + b * py <= c
        q_in = a * qx + b * qy <= c
        if p_in:
            out.append((px, py))
        if p_in != q_in:
            denom = a * (qx - px) + b * (qy - py)
            t = (c - a * px - b * py) / denom
            out.append((px + t * (qx - px), py + t * (qy - py)))
    # drop consecutive duplicates a vertex exactly on the line can produce
    dedup: list[Point2] = []
    for v in out:
        if not dedup or v != dedup[-1]:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def clip_halfplanes(polygon: Sequence[Point2], halfplanes: Sequence[HalfPlane]) -> list[Point2]:
    poly = list(polygon)
    for hp in halfplanes:
        poly = clip_halfplane(poly, hp)
        if len(poly) < 3:
            return poly
    return poly


def _shoelace(polygon: Sequence[Point2]) -> Fraction:
    total = Fraction(0)
    n = len(polygon)
    for k in range(n):
        x1, y1 = polygon[k]
        x2, y2 = polygon[(k + 1) % n]
        total += x1 * y2 - x2 * y1
    return total / 2


def clipped_area(clip_spec: Sequence) -> Fraction:
    """Area of box-intersect-halfplanes; clip_spec = [box_vertices, hp, ...]."""
    box, *halfplanes = clip_spec
    poly = clip_halfplanes(box, halfplanes)
    if len(poly) < 3:
        return Fraction(0)
    return _shoelace(poly)

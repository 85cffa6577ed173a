"""Exact rational segment predicates."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple


class Point(NamedTuple):
    x: Fraction
    y: Fraction


def pt(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


class OverlapError(ValueError):
    """Two segments share a sub-segment of positive length."""


def orient(a: Point, b: Point, c: Point) -> int:
    d = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (d > 0) - (d < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def _point_segment(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    # at least one segment has zero length
    if a == b:
        return a if on_segment(a, c, d) else None
    return c if on_segment(c, a, b) else None


def segment_intersection(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    """Unique common point of closed segments ab and cd, or None.

    Raises OverlapError when the segments are collinear and share more than
    a single point.
    """
    if a == b or c == d:
        return _point_segment(a, b, c, d)
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 == 0 and o2 == 0:
        # collinear: project on the dominant axis
        key = (lambda p: p.x) if a.x != b.x else (lambda p: p.y)
        lo1, hi1 = sorted((a, b), key=key)
        lo2, hi2 = sorted((c, d), key=key)
        lo = max(lo1, lo2, key=key)
        hi = min(hi1, hi2, key=key)
        if key(lo) > key(hi):
            return None
        if key(lo) == key(hi):
            return lo
        raise OverlapError("collinear segments overlap")
    if o1 * o2 > 0 or o3 * o4 > 0:
        return None
    # proper or touching intersection: solve a + t(b - a) on line cd
    den = (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x)
    t = ((c.x - a.x) * (d.y - c.y) - (c.y - a.y) * (d.x - c.x)) / den
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def parametric_intersection(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    """Slow reference solver used to cross-check ``segment_intersection``.

    Solves ``a + t(b-a) = c + s(d-c)`` by Cramer's rule; handles the
    collinear case by testing the four endpoints.
    """
    if a == b or c == d:
        return _point_segment(a, b, c, d)
    rx, ry = b.x - a.x, b.y - a.y
    sx, sy = d.x - c.x, d.y - c.y
    den = rx * sy - ry * sx
    if den == 0:
        hits = {p for p in (a, b) if on_segment(p, c, d)} | {p for p in (c, d) if on_segment(p, a, b)}
        if not hits:
            return None
        if len(hits) == 1:
            return next(iter(hits))
        raise OverlapError("collinear segments overlap")
    qx, qy = c.x - a.x, c.y - a.y
    t = (qx * sy - qy * sx) / den
    s = (qx * ry - qy * rx) / den
    if 0 <= t <= 1 and 0 <= s <= 1:
        return Point(a.x + t * rx, a.y + t * ry)
    return None


def fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_q(text: str) -> Fraction:
    if "/" in text:
        p, q = text.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(text))

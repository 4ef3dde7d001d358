"""Exact rational plane geometry for straight-line graph drawings.

All predicates run on `fractions.Fraction` coordinates, so collinearity,
crossing and angular-order decisions are exact: chirality conventions
(clockwise boundary reading, left/right of a path) never depend on float
rounding.
"""

from __future__ import annotations

from fractions import Fraction

Point = tuple[Fraction, Fraction]


def to_fraction(value) -> Fraction:
    """Coerce a number to an exact Fraction.

    Floats go through ``repr`` so ``0.3`` becomes 3/10 (shortest decimal),
    not the binary expansion of the double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a coordinate/probability")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to Fraction")


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Cross product (a - o) x (b - o); > 0 means b is CCW from a around o."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dot(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[0] - o[0]) + (a[1] - o[1]) * (b[1] - o[1])


def _on_segment(p: Point, q: Point, r: Point) -> bool:
    """Whether collinear point r lies on the closed segment pq."""
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def segments_conflict(p1: Point, q1: Point, p2: Point, q2: Point) -> bool:
    """Whether two drawn segments meet anywhere except a shared endpoint.

    Proper crossings, interior touchings and collinear overlaps all count as
    conflicts; meeting exactly at a common endpoint does not.
    """
    ends1 = {p1, q1}
    ends2 = {p2, q2}
    shared = ends1 & ends2
    if len(shared) == 2:
        return True  # duplicate segment
    if len(shared) == 1:
        s = next(iter(shared))
        a = q1 if p1 == s else p1
        b = q2 if p2 == s else p2
        # Conflict only if the free ends leave s in the same direction
        # (collinear overlap along a shared ray).
        return cross(s, a, b) == 0 and dot(s, a, b) > 0
    d1 = cross(p2, q2, p1)
    d2 = cross(p2, q2, q1)
    d3 = cross(p1, q1, p2)
    d4 = cross(p1, q1, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _on_segment(p2, q2, p1):
        return True
    if d2 == 0 and _on_segment(p2, q2, q1):
        return True
    if d3 == 0 and _on_segment(p1, q1, p2):
        return True
    if d4 == 0 and _on_segment(p1, q1, q2):
        return True
    return False


def quadrant(dx: Fraction, dy: Fraction) -> int:
    """Quadrant index of a direction for CCW order from the positive x-axis.

    0: [0, 90), 1: [90, 180), 2: [180, 270), 3: [270, 360).
    """
    if dx > 0 and dy >= 0:
        return 0
    if dx <= 0 and dy > 0:
        return 1
    if dx < 0 and dy <= 0:
        return 2
    if dx >= 0 and dy < 0:
        return 3
    raise ValueError("zero direction vector")


def ccw_less(d1: tuple[Fraction, Fraction], d2: tuple[Fraction, Fraction]) -> bool:
    """Strict counterclockwise angular order of two nonzero directions."""
    q1, q2 = quadrant(*d1), quadrant(*d2)
    if q1 != q2:
        return q1 < q2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    if c == 0:
        raise ValueError("equal directions have no strict angular order")
    return c > 0


def polygon_signed_area2(points: list[Point]) -> Fraction:
    """Twice the signed area of a closed polygonal walk (CCW positive)."""
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def point_in_polygon(pt: Point, polygon: list[Point]) -> bool:
    """Exact even-odd test; ``pt`` must not lie on the polygon boundary."""
    x, y = pt
    inside = False
    n = len(polygon)
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        if y1 == y2:
            if y == y1 and min(x1, x2) <= x <= max(x1, x2):
                raise ValueError("query point on polygon boundary")
            continue
        if (y1 <= y < y2) or (y2 <= y < y1):
            # x-coordinate where the edge crosses the horizontal line at y
            t = Fraction(y - y1, y2 - y1)
            xc = x1 + t * (x2 - x1)
            if xc == x:
                raise ValueError("query point on polygon boundary")
            if xc > x:
                inside = not inside
    return inside

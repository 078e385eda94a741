"""Planar primitives: points, segments, polygons, line intersection, the
opposite-point map through a concave vertex, convex covers and validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    DegenerateSegment,
    HoleOutsideOuter,
    LineThroughVertexParallel,
    ParallelLines,
    SelfIntersecting,
    TooFewVertices,
)

# Parallelism threshold, relative to the squared length scale of the inputs.
TAU_PAR = 1e-12
# Degenerate-segment threshold, relative to the length scale.
TAU_DEG = 1e-12
TAU_ANG = 1e-12


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __mul__(self, k):
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Point(self.x / k, self.y / k)

    def __neg__(self):
        return Point(-self.x, -self.y)


class Segment(NamedTuple):
    p: Point
    q: Point

    @property
    def length(self) -> float:
        return norm(self.q - self.p)

    def at(self, t: float) -> Point:
        return self.p + (self.q - self.p) * t


def as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))


def cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1]


def norm(a) -> float:
    return math.hypot(a[0], a[1])


def unit(a) -> Point:
    n = norm(a)
    if n == 0.0:
        raise DegenerateSegment("zero-length direction")
    return Point(a[0] / n, a[1] / n)


def length_scale(*points) -> float:
    """Bounding-box diagonal of the given points (1.0 when they coincide)."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    s = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    return s if s > 0.0 else 1.0


def intersect_lines(A, A2, B, B2) -> Point:
    """Intersection O of the supporting lines of segments AA2 and BB2."""
    A, A2, B, B2 = map(as_point, (A, A2, B, B2))
    scale = length_scale(A, A2, B, B2)
    da = A2 - A
    db = B2 - B
    if norm(da) <= TAU_DEG * scale or norm(db) <= TAU_DEG * scale:
        raise DegenerateSegment("segment endpoints coincide")
    den = cross(da, db)
    if abs(den) <= TAU_PAR * scale * scale:
        raise ParallelLines("supporting lines are parallel")
    det_a = cross(A, A2)
    det_b = cross(B, B2)
    # 2x2 determinant form; the overall sign is fixed so that O lies on both lines.
    x = -(det_a * db.x - da.x * det_b) / den
    y = -(det_a * db.y - da.y * det_b) / den
    return Point(x, y)


def angle_between(A, A2, B, B2) -> float:
    """Angle in [0, pi] between directions AA2 and BB2."""
    da = as_point(A2) - as_point(A)
    db = as_point(B2) - as_point(B)
    na, nb = norm(da), norm(db)
    scale = length_scale(A, A2, B, B2)
    if na <= TAU_DEG * scale or nb <= TAU_DEG * scale:
        raise DegenerateSegment("segment endpoints coincide")
    c = dot(da, db) / (na * nb)
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True)
class TriangleSides:
    """Side lengths, opposite angles (alpha opposite a, ...) and area."""

    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    area: float

    @property
    def heights(self) -> tuple[float, float, float]:
        return (2 * self.area / self.a, 2 * self.area / self.b, 2 * self.area / self.c)


def _clamped_acos(v: float) -> float:
    return math.acos(min(1.0, max(-1.0, v)))


def solve_triangle(a: float, b: float, gamma: float) -> TriangleSides:
    """Complete the triangle with sides a, b enclosing the angle gamma."""
    if not (a > 0 and b > 0 and 0 < gamma < math.pi):
        raise DegenerateInput(f"invalid triangle a={a}, b={b}, gamma={gamma}")
    c = math.sqrt(max(a * a + b * b - 2 * a * b * math.cos(gamma), 0.0))
    if c == 0.0:
        raise DegenerateInput("collapsed triangle")
    alpha = _clamped_acos((b - a * math.cos(gamma)) / c)
    beta = _clamped_acos((a - b * math.cos(gamma)) / c)
    area = 0.5 * a * b * math.sin(gamma)
    return TriangleSides(a, b, c, alpha, beta, gamma, area)


def triangle_from_points(P, Q, R) -> TriangleSides:
    """Triangle with vertices A=P, B=Q, C=R (a = |BC|, b = |CA|, c = |AB|)."""
    P, Q, R = map(as_point, (P, Q, R))
    a = norm(R - Q)
    b = norm(P - R)
    gamma = angle_between(R, Q, R, P)
    return solve_triangle(a, b, gamma)


def project_through(P, V, T0, e) -> float:
    """Parameter u such that T0 + u*e lies on the line through P and V."""
    r = (V[0] - P[0], V[1] - P[1])
    den = cross(e, r)
    scale = max(norm(r), norm(e), 1e-300)
    if abs(den) <= TAU_PAR * scale * scale:
        raise LineThroughVertexParallel("line through the vertex is parallel to the target")
    return cross((P[0] - T0[0], P[1] - T0[1]), r) / den


def opposite(x: float, V, O, v, D, w) -> float:
    """Coordinate y along the ray O + y*w of the point collinear with V and O + x*v.

    D is any point of the target line; its coordinate is measured along w.
    """
    V, O, v, D, w = map(as_point, (V, O, v, D, w))
    X = O + v * x
    r = X - V
    den = cross(r, w)
    scale = max(norm(r), 1.0)
    if abs(den) <= TAU_PAR * scale:
        raise LineThroughVertexParallel("line through the vertex is parallel to the target")
    return dot(D - O, w) - cross(r, D - V) / den


def opposite_parallel(x: float, V, B, v, D) -> float:
    """Parallel-lines variant: x measured from B along v, y from the foot of B
    on the target line (the line through D parallel to v)."""
    V, B, v, D = map(as_point, (V, B, v, D))
    r = v * x - (V - B)
    den = cross(r, v)
    scale = max(norm(r), 1.0)
    if abs(den) <= TAU_PAR * scale:
        raise LineThroughVertexParallel("line through the vertex is parallel to the target")
    return dot(D - B, v) - cross(r, D - V) / den


def convex_cover(points: Iterable) -> list[Point]:
    """Counterclockwise convex hull (monotone chain), collinear points dropped."""
    pts = sorted(set(as_point(p) for p in points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull


def signed_area(ring: Sequence) -> float:
    s = 0.0
    n = len(ring)
    for i in range(n):
        s += cross(ring[i], ring[(i + 1) % n])
    return 0.5 * s


def point_in_ring(pt, ring: Sequence) -> bool:
    """Even-odd test; boundary points are unspecified."""
    x, y = pt
    inside = False
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


def _orient(a, b, c, eps) -> int:
    v = cross(b - a, c - a)
    if v > eps:
        return 1
    if v < -eps:
        return -1
    return 0


def _on_segment(a, b, p) -> bool:
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_intersect(p1, p2, q1, q2, eps: float = 0.0) -> bool:
    """Closed-segment intersection test (touching counts)."""
    p1, p2, q1, q2 = map(as_point, (p1, p2, q1, q2))
    o1 = _orient(p1, p2, q1, eps)
    o2 = _orient(p1, p2, q2, eps)
    o3 = _orient(q1, q2, p1, eps)
    o4 = _orient(q1, q2, p2, eps)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_segment(q1, q2, p2):
        return True
    return False


@dataclass(frozen=True)
class Polygon:
    """Outer ring counterclockwise, hole rings clockwise.

    With that orientation the interior always lies to the left of every edge.
    """

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = ()

    @property
    def rings(self) -> tuple[tuple[Point, ...], ...]:
        return (self.outer,) + self.holes

    @property
    def edges(self) -> list[Segment]:
        out = []
        for ring in self.rings:
            n = len(ring)
            out.extend(Segment(ring[i], ring[(i + 1) % n]) for i in range(n))
        return out

    @property
    def vertices(self) -> list[Point]:
        return [p for ring in self.rings for p in ring]

    @property
    def area(self) -> float:
        return sum(signed_area(r) for r in self.rings)

    @property
    def perimeter(self) -> float:
        return sum(e.length for e in self.edges)

    @property
    def diameter(self) -> float:
        pts = np.asarray(self.outer, dtype=float)
        d = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    @property
    def scale(self) -> float:
        return length_scale(*self.outer)

    def is_convex(self) -> bool:
        if self.holes:
            return False
        ring = self.outer
        n = len(ring)
        tol = TAU_PAR * self.scale ** 2
        return all(
            cross(ring[(i + 1) % n] - ring[i], ring[(i + 2) % n] - ring[(i + 1) % n]) >= -tol
            for i in range(n)
        )

    def transformed(self, angle: float = 0.0, shift=(0.0, 0.0), factor: float = 1.0) -> "Polygon":
        """Rotate by angle, scale by factor, then translate by shift."""
        c, s = math.cos(angle), math.sin(angle)

        def tf(p):
            return Point(factor * (c * p.x - s * p.y) + shift[0], factor * (s * p.x + c * p.y) + shift[1])

        return Polygon(tuple(tf(p) for p in self.outer), tuple(tuple(tf(p) for p in h) for h in self.holes))

    def to_dict(self) -> dict:
        return {
            "outer": [[p.x, p.y] for p in self.outer],
            "holes": [[[p.x, p.y] for p in h] for h in self.holes],
        }


def _clean_ring(raw) -> list[Point]:
    pts = [as_point(p) for p in raw]
    for p in pts:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise DegenerateInput("non-finite coordinate")
    out: list[Point] = []
    for p in pts:
        if not out or p != out[-1]:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    if len(out) < 3:
        raise TooFewVertices(f"ring has {len(out)} distinct vertices, need at least 3")
    return out


def _check_simple(ring: Sequence[Point], eps: float) -> None:
    n = len(ring)
    for i in range(n):
        a1, a2 = ring[i], ring[(i + 1) % n]
        for j in range(i + 1, n):
            b1, b2 = ring[j], ring[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # folding back onto the previous edge
                shared = a2 if j == i + 1 else a1
                other_a = a1 if j == i + 1 else a2
                other_b = b2 if j == i + 1 else b1
                u, v = other_a - shared, other_b - shared
                if abs(cross(u, v)) <= eps and dot(u, v) > 0:
                    raise SelfIntersecting("adjacent edges overlap")
                continue
            if segments_intersect(a1, a2, b1, b2, eps):
                raise SelfIntersecting(f"edges {i} and {j} intersect")


def validate_polygon(raw) -> Polygon:
    """Build a Polygon from raw coordinates.

    Accepts {"outer": [[x, y], ...], "holes": [[[x, y], ...], ...]} or a bare
    list of outer vertices. Rings are reoriented (outer CCW, holes CW).
    """
    if isinstance(raw, Polygon):
        raw = raw.to_dict()
    if isinstance(raw, dict):
        outer_raw = raw.get("outer")
        holes_raw = raw.get("holes") or []
        if outer_raw is None:
            raise DegenerateInput("missing 'outer' ring")
    else:
        outer_raw, holes_raw = raw, []
    outer = _clean_ring(outer_raw)
    holes = [_clean_ring(h) for h in holes_raw]
    scale = length_scale(*outer)
    eps = TAU_PAR * scale * scale
    if abs(signed_area(outer)) <= eps:
        raise SelfIntersecting("outer ring has zero area")
    if signed_area(outer) < 0:
        outer.reverse()
    for h in holes:
        if abs(signed_area(h)) <= eps:
            raise SelfIntersecting("hole has zero area")
        if signed_area(h) > 0:
            h.reverse()
    rings = [outer] + holes
    for r in rings:
        _check_simple(r, eps)
    for i in range(len(rings)):
        for j in range(i + 1, len(rings)):
            ri, rj = rings[i], rings[j]
            for a in range(len(ri)):
                for b in range(len(rj)):
                    if segments_intersect(ri[a], ri[(a + 1) % len(ri)], rj[b], rj[(b + 1) % len(rj)], eps):
                        raise SelfIntersecting(f"rings {i} and {j} touch or cross")
    for k, h in enumerate(holes):
        if not point_in_ring(h[0], outer):
            raise HoleOutsideOuter(f"hole {k} lies outside the outer ring")
        for m, other in enumerate(holes):
            if m != k and point_in_ring(h[0], other):
                raise HoleOutsideOuter(f"hole {k} is nested inside hole {m}")
    return Polygon(tuple(outer), tuple(tuple(h) for h in holes))

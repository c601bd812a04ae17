"""
Geometry — planar primitives for polygonal systems.

Predicates (containment, intersection classification, vertex equality) run
in exact rational arithmetic whenever the coordinates are ``int`` or
``Fraction``; metric quantities (distances, angles, stretch factors) are
returned as floats.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import settings
from ..errors import (
    Degenerate,
    EmptyInput,
    InvalidPolygon,
    NonContractive,
    NotSharedVertex,
)

logger = logging.getLogger(__name__)

# Hulls up to this size are measured all-pairs; rotating calipers above it
HULL_BRUTE_FORCE = 64

Number = Union[int, Fraction, float]


def is_exact(value: Number) -> bool:
    return isinstance(value, (int, Fraction))


def _near_zero(value: Number) -> bool:
    if is_exact(value):
        return value == 0
    return abs(value) <= settings.tolerance


@dataclass(frozen=True)
class Point2:
    x: Number
    y: Number

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in ({self.x}, {self.y})")

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    @property
    def exact(self) -> bool:
        return is_exact(self.x) and is_exact(self.y)

    def as_floats(self) -> Tuple[float, float]:
        return float(self.x), float(self.y)


def same_point(p: Point2, q: Point2) -> bool:
    """Exact equality for rational points, absolute tolerance otherwise."""
    if p.exact and q.exact:
        return p.x == q.x and p.y == q.y
    return abs(p.x - q.x) <= settings.tolerance and abs(p.y - q.y) <= settings.tolerance


def midpoint(p: Point2, q: Point2) -> Point2:
    half = Fraction(1, 2) if p.exact and q.exact else 0.5
    return Point2((p.x + q.x) * half, (p.y + q.y) * half)


def cross(o: Point2, a: Point2, b: Point2) -> Number:
    """Twice the signed area of (o, a, b); positive when counterclockwise."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def distance(p: Point2, q: Point2) -> float:
    return math.hypot(float(p.x) - float(q.x), float(p.y) - float(q.y))


# -- Affine maps -------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap2:
    """S(x, y) = (a*x + b*y + e, c*x + d*y + f)."""

    a: Number
    b: Number
    c: Number
    d: Number
    e: Number = 0
    f: Number = 0

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d", "e", "f"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite coefficient {name}")
        if self.det == 0:
            raise Degenerate("linear part is singular")

    @classmethod
    def identity(cls) -> "AffineMap2":
        return cls(1, 0, 0, 1, 0, 0)

    @classmethod
    def from_triangles(
        cls, src: Sequence[Point2], dst: Sequence[Point2],
    ) -> "AffineMap2":
        """The unique affine map sending src[k] to dst[k] for k = 0, 1, 2."""
        p0, p1, p2 = src
        q0, q1, q2 = dst
        u1, u2 = p1 - p0, p2 - p0
        v1, v2 = q1 - q0, q2 - q0
        det = u1.x * u2.y - u2.x * u1.y
        if det == 0:
            raise Degenerate("source triangle is degenerate")
        # L = [v1 v2] * [u1 u2]^-1
        a = (v1.x * u2.y - v2.x * u1.y) / det
        b = (v2.x * u1.x - v1.x * u2.x) / det
        c = (v1.y * u2.y - v2.y * u1.y) / det
        d = (v2.y * u1.x - v1.y * u2.x) / det
        e = q0.x - (a * p0.x + b * p0.y)
        f = q0.y - (c * p0.x + d * p0.y)
        return cls(a, b, c, d, e, f)

    @property
    def det(self) -> Number:
        return self.a * self.d - self.b * self.c

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in (self.a, self.b, self.c, self.d, self.e, self.f))

    def __call__(self, p: Point2) -> Point2:
        return Point2(
            self.a * p.x + self.b * p.y + self.e,
            self.c * p.x + self.d * p.y + self.f,
        )

    def compose(self, other: "AffineMap2") -> "AffineMap2":
        """self ∘ other."""
        return AffineMap2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.a * other.e + self.b * other.f + self.e,
            self.c * other.e + self.d * other.f + self.f,
        )

    def inverse(self) -> "AffineMap2":
        det = self.det
        a, b, c, d = self.d / det, -self.b / det, -self.c / det, self.a / det
        return AffineMap2(a, b, c, d, -(a * self.e + b * self.f), -(c * self.e + d * self.f))

    def linear_matrix(self) -> np.ndarray:
        return np.array(
            [[float(self.a), float(self.b)], [float(self.c), float(self.d)]],
        )


def singular_values(m: AffineMap2) -> Tuple[float, float]:
    """
    Largest and smallest singular values of the linear part, from the
    eigenvalues of the 2x2 Gram matrix LᵀL.
    """
    a, b, c, d = float(m.a), float(m.b), float(m.c), float(m.d)
    p = a * a + c * c
    r = b * b + d * d
    s = a * b + c * d
    mid = (p + r) / 2
    half = math.hypot((p - r) / 2, s)
    big = math.sqrt(mid + half)
    if big == 0:
        return 0.0, 0.0
    # |det| / Q keeps the small value accurate when mid ≈ half
    return big, abs(float(m.det)) / big


def stretch_factors(m: AffineMap2) -> Tuple[float, float]:
    """(Q, q): maximal and minimal stretch of a contraction, both in (0, 1)."""
    big, small = singular_values(m)
    if small == 0:
        raise Degenerate(f"map {m} collapses a direction")
    if big >= 1:
        raise NonContractive(f"map {m} has stretch {big!r} >= 1")
    return big, small


# -- Convex polygons --------------------------------------------------------------

def _signed_area2(vertices: Sequence[Point2]) -> Number:
    total = 0
    n = len(vertices)
    for k in range(n):
        p, q = vertices[k], vertices[(k + 1) % n]
        total += p.x * q.y - q.x * p.y
    return total


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices."""

    vertices: Tuple[Point2, ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if n < 3:
            raise InvalidPolygon(f"polygon needs at least 3 vertices, got {n}")
        for k in range(n):
            turn = cross(self.vertices[k - 1], self.vertices[k], self.vertices[(k + 1) % n])
            if turn <= 0 or _near_zero(turn):
                raise InvalidPolygon(
                    f"polygon is not strictly convex and counterclockwise at vertex {k}"
                )

    @classmethod
    def from_points(cls, points: Iterable[Point2]) -> "ConvexPolygon":
        """Accept either orientation; store counterclockwise."""
        pts = tuple(points)
        if len(pts) >= 3 and _signed_area2(pts) < 0:
            pts = tuple(reversed(pts))
        return cls(pts)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> List[Tuple[Point2, Point2]]:
        n = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def contains(self, p: Point2) -> bool:
        """Closed containment."""
        for a, b in self.edges():
            side = cross(a, b, p)
            if side < 0 and not _near_zero(side):
                return False
        return True

    def vertex_index(self, p: Point2) -> Optional[int]:
        for k, v in enumerate(self.vertices):
            if same_point(v, p):
                return k
        return None

    def bounding_box(self) -> Tuple[Number, Number, Number, Number]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def apply(m: AffineMap2, p: ConvexPolygon) -> ConvexPolygon:
    """Image polygon, re-oriented counterclockwise when det < 0."""
    image = [m(v) for v in p.vertices]
    if m.det < 0:
        image.reverse()
    return ConvexPolygon(tuple(image))


# -- Intersection -------------------------------------------------------------------

class IntersectionKind(str, Enum):
    EMPTY = "Empty"
    SINGLE_POINT = "SinglePoint"
    EXTENDED = "Extended"


@dataclass(frozen=True)
class Intersection:
    kind: IntersectionKind
    point: Optional[Point2] = None


def _clip(points: List[Point2], a: Point2, b: Point2) -> List[Point2]:
    """Clip a convex point cycle by the closed half-plane left of a->b."""
    if not points:
        return []
    sides = []
    for p in points:
        s = cross(a, b, p)
        sides.append(0 if _near_zero(s) else s)
    out: List[Point2] = []
    n = len(points)
    for k in range(n):
        p, q = points[k], points[(k + 1) % n]
        sp, sq = sides[k], sides[(k + 1) % n]
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = sp / (sp - sq)
            out.append(Point2(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t))
    return out


def _distinct(points: Iterable[Point2]) -> List[Point2]:
    result: List[Point2] = []
    for p in points:
        if not any(same_point(p, q) for q in result):
            result.append(p)
    return result


def convex_intersection(p1: ConvexPolygon, p2: ConvexPolygon) -> Intersection:
    """
    Classify p1 ∩ p2 by intersecting p1 with the half-planes of p2.
    SinglePoint iff the resulting polytope is 0-dimensional.
    """
    region = list(p1.vertices)
    for a, b in p2.edges():
        region = _clip(region, a, b)
        if not region:
            return Intersection(IntersectionKind.EMPTY)
    distinct = _distinct(region)
    if len(distinct) == 1:
        return Intersection(IntersectionKind.SINGLE_POINT, distinct[0])
    return Intersection(IntersectionKind.EXTENDED)


# -- Distances ---------------------------------------------------------------------

def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    px, py = p.as_floats()
    ax, ay = a.as_floats()
    bx, by = b.as_floats()
    dx, dy = bx - ax, by - ay
    length2 = dx * dx + dy * dy
    if length2 == 0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / length2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def point_polygon_distance(a: Point2, p: ConvexPolygon) -> float:
    if p.contains(a):
        return 0.0
    return min(point_segment_distance(a, u, v) for u, v in p.edges())


def min_distance(p1: ConvexPolygon, p2: ConvexPolygon) -> float:
    if convex_intersection(p1, p2).kind is not IntersectionKind.EMPTY:
        return 0.0
    # Disjoint convex polygons: the closest pair involves a vertex of one of them
    best = min(point_polygon_distance(v, p2) for v in p1.vertices)
    return min(best, min(point_polygon_distance(v, p1) for v in p2.vertices))


# -- Angles -------------------------------------------------------------------------

def _ray_angle(u: Tuple[float, float], v: Tuple[float, float]) -> float:
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u[0] * v[0] + u[1] * v[1])


def incident_rays(a: Point2, p: ConvexPolygon) -> List[Tuple[float, float]]:
    """Directions of the two sides of p leaving its vertex a."""
    k = p.vertex_index(a)
    if k is None:
        raise NotSharedVertex(f"({a.x}, {a.y}) is not a vertex of {p}")
    n = len(p.vertices)
    ax, ay = a.as_floats()
    rays = []
    for neighbour in (p.vertices[k - 1], p.vertices[(k + 1) % n]):
        nx, ny = neighbour.as_floats()
        rays.append((nx - ax, ny - ay))
    return rays


def incident_side_angles(a: Point2, p1: ConvexPolygon, p2: ConvexPolygon) -> float:
    """Minimum unsigned angle between a side of p1 and a side of p2 leaving a."""
    return min(
        _ray_angle(u, v)
        for u in incident_rays(a, p1)
        for v in incident_rays(a, p2)
    )


# -- Diameter -----------------------------------------------------------------------

def _hull(points: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _d2(p, q) -> float:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def _all_pairs(coords) -> float:
    arr = np.array(coords)
    diff = arr[:, None, :] - arr[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=-1).max()))


def diameter(points: Sequence[Point2]) -> float:
    """Maximum pairwise distance, by rotating calipers on the convex hull."""
    if not points:
        raise EmptyInput("diameter of an empty point list")
    coords = [p.as_floats() for p in points]
    if len(coords) <= 8:
        return _all_pairs(coords)

    hull = _hull(coords)
    n = len(hull)
    if n == 1:
        return 0.0
    if n <= HULL_BRUTE_FORCE:
        return _all_pairs(hull)

    def area(i, j, k):
        a, b, c = hull[i], hull[j], hull[k]
        return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    best = 0.0
    j = 1
    for i in range(n):
        i1 = (i + 1) % n
        while area(i, i1, (j + 1) % n) > area(i, i1, j):
            j = (j + 1) % n
        best = max(best, _d2(hull[i], hull[j]), _d2(hull[i1], hull[j]))
    return math.sqrt(best)


def squared_diameter_exact(points: Sequence[Point2]) -> Number:
    """All-pairs squared diameter in the points' own arithmetic (small inputs)."""
    if not points:
        raise EmptyInput("diameter of an empty point list")
    best: Number = 0
    for k, p in enumerate(points):
        for q in points[k + 1:]:
            best = max(best, (p.x - q.x) ** 2 + (p.y - q.y) ** 2)
    return best

"""Exact predicates, stretch factors, intersections, angles and diameters."""

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from dendrify.errors import Degenerate, EmptyInput, InvalidPolygon, NonContractive, NotSharedVertex
from dendrify.services.geometry import (
    AffineMap2,
    ConvexPolygon,
    IntersectionKind,
    Point2,
    apply,
    convex_intersection,
    cross,
    diameter,
    incident_side_angles,
    min_distance,
    point_polygon_distance,
    singular_values,
    stretch_factors,
)


def square(x0=0, y0=0, side=1) -> ConvexPolygon:
    return ConvexPolygon((
        Point2(x0, y0), Point2(x0 + side, y0),
        Point2(x0 + side, y0 + side), Point2(x0, y0 + side),
    ))


coefficient = st.floats(min_value=-0.7, max_value=0.7, allow_nan=False)


@st.composite
def linear_maps(draw):
    a, b, c, d = (draw(coefficient) for _ in range(4))
    assume(abs(a * d - b * c) > 1e-6)
    return AffineMap2(a, b, c, d)


# -- stretch factors ------------------------------------------------------------

def test_singular_values_of_diagonal():
    assert singular_values(AffineMap2(F(1, 2), 0, 0, F(1, 4))) == pytest.approx((0.5, 0.25))


def test_rotation_scaled_is_similarity():
    t = 0.3
    big, small = singular_values(AffineMap2(0.5 * math.cos(t), -0.5 * math.sin(t), 0.5 * math.sin(t), 0.5 * math.cos(t)))
    assert big == pytest.approx(0.5)
    assert small == pytest.approx(0.5)


@given(linear_maps())
@settings(max_examples=200)
def test_singular_values_match_numpy(m):
    expected = np.linalg.svd(m.linear_matrix(), compute_uv=False)
    big, small = singular_values(m)
    assert big == pytest.approx(expected[0], rel=1e-9, abs=1e-12)
    assert small == pytest.approx(expected[1], rel=1e-7, abs=1e-12)
    assert small <= big


def test_stretch_factors_of_a_shear():
    big, small = stretch_factors(AffineMap2(F(1, 2), F(1, 2), 0, F(1, 2)))
    assert big == pytest.approx((1 + math.sqrt(5)) / 4)
    assert small == pytest.approx((math.sqrt(5) - 1) / 4)
    assert big == pytest.approx(0.809017, abs=1e-6)
    assert small == pytest.approx(0.309017, abs=1e-6)


ANGLES = np.linspace(0, 2 * np.pi, 3600, endpoint=False)
UNIT_DIRECTIONS = np.stack([np.cos(ANGLES), np.sin(ANGLES)])


@given(linear_maps())
@settings(max_examples=300)
def test_stretch_factors_bound_every_direction(m):
    big, small = singular_values(m)
    assume(big < 1 and small > 0.1)
    Q, q = stretch_factors(m)
    lengths = np.linalg.norm(m.linear_matrix() @ UNIT_DIRECTIONS, axis=0)
    assert lengths.max() <= Q + 1e-9
    assert lengths.min() >= q - 1e-9
    assert lengths.max() == pytest.approx(Q, abs=1e-6)
    assert lengths.min() == pytest.approx(q, abs=1e-5)


rational = st.fractions(min_value=F(-7, 10), max_value=F(7, 10), max_denominator=997)


@st.composite
def rational_maps(draw):
    a, b, c, d = (draw(rational) for _ in range(4))
    assume(a * d - b * c != 0)
    return AffineMap2(a, b, c, d, draw(rational), draw(rational))


@given(rational_maps(), rational_maps())
@settings(max_examples=500)
def test_composition_bounds(m1, m2):
    Q1, q1 = singular_values(m1)
    Q2, q2 = singular_values(m2)
    Q, q = singular_values(m1.compose(m2))
    assert Q <= Q1 * Q2 * (1 + 1e-12)
    assert q >= q1 * q2 * (1 - 1e-12)


def test_identity_is_not_contractive():
    with pytest.raises(NonContractive):
        stretch_factors(AffineMap2.identity())


def test_singular_linear_part_rejected():
    with pytest.raises(Degenerate):
        AffineMap2(1, 0, 0, 0)


def test_from_triangles_is_exact():
    src = (Point2(0, 0), Point2(1, 0), Point2(0, 1))
    dst = (Point2(F(1, 3), 0), Point2(F(1, 2), F(1, 7)), Point2(0, F(2, 5)))
    m = AffineMap2.from_triangles(src, dst)
    assert tuple(m(p) for p in src) == dst
    assert m.exact


def test_compose_and_inverse():
    s = AffineMap2(F(1, 2), F(1, 5), 0, F(1, 3), 1, 2)
    t = AffineMap2(F(2, 3), 0, F(-1, 4), F(1, 2), F(1, 7), 0)
    p = Point2(F(3, 11), F(-5, 2))
    assert s.compose(t)(p) == s(t(p))
    assert s.inverse()(s(p)) == p


# -- polygons ---------------------------------------------------------------------

def test_polygon_rejects_collinear_vertices():
    with pytest.raises(InvalidPolygon):
        ConvexPolygon((Point2(0, 0), Point2(1, 0), Point2(2, 0)))


def test_polygon_rejects_clockwise_but_from_points_normalizes():
    cw = (Point2(0, 0), Point2(0, 1), Point2(1, 1), Point2(1, 0))
    with pytest.raises(InvalidPolygon):
        ConvexPolygon(cw)
    assert ConvexPolygon.from_points(cw).vertices[0] == Point2(1, 0)


def test_apply_keeps_counterclockwise_under_reflection():
    image = apply(AffineMap2(F(-1, 2), 0, 0, F(1, 2)), square())
    assert len(image) == 4


def test_contains_is_closed():
    sq = square()
    assert sq.contains(Point2(1, F(1, 2)))
    assert sq.contains(Point2(0, 0))
    assert not sq.contains(Point2(F(11, 10), F(1, 2)))


# -- intersections -----------------------------------------------------------------

@pytest.mark.parametrize(
    "offset, kind",
    [
        ((1, 1), IntersectionKind.SINGLE_POINT),
        ((1, 0), IntersectionKind.EXTENDED),
        ((F(1, 2), F(1, 2)), IntersectionKind.EXTENDED),
        ((2, 0), IntersectionKind.EMPTY),
        ((F(1, 2), F(3, 2)), IntersectionKind.EMPTY),
    ],
)
def test_square_intersections(offset, kind):
    assert convex_intersection(square(), square(*offset)).kind is kind


def test_corner_contact_reports_the_point():
    hit = convex_intersection(square(), square(1, 1))
    assert hit.point == Point2(1, 1)


def test_vertex_against_edge_is_single_point():
    diamond = ConvexPolygon((Point2(1, F(1, 2)), Point2(2, 0), Point2(3, F(1, 2)), Point2(2, 1)))
    hit = convex_intersection(square(), diamond)
    assert hit.kind is IntersectionKind.SINGLE_POINT
    assert hit.point == Point2(1, F(1, 2))


grid = st.integers(0, 4)


@st.composite
def grid_triangles(draw):
    points = [Point2(draw(grid), draw(grid)) for _ in range(3)]
    assume(cross(*points) != 0)
    return ConvexPolygon.from_points(points)


@given(grid_triangles(), grid_triangles())
@settings(max_examples=300)
def test_intersection_is_symmetric(a, b):
    forward, backward = convex_intersection(a, b), convex_intersection(b, a)
    assert forward.kind is backward.kind
    assert forward.point == backward.point


@given(grid_triangles(), grid_triangles())
@settings(max_examples=300)
def test_zero_distance_exactly_when_intersecting(a, b):
    touching = convex_intersection(a, b).kind is not IntersectionKind.EMPTY
    assert (min_distance(a, b) == 0) == touching


def test_min_distance():
    assert min_distance(square(), square(2, 0)) == pytest.approx(1.0)
    assert min_distance(square(), square(2, 2)) == pytest.approx(math.sqrt(2))
    assert min_distance(square(), square(1, 1)) == 0.0


@pytest.mark.parametrize(
    "point, expected",
    [((F(1, 2), F(1, 2)), 0.0), ((2, F(1, 2)), 1.0), ((2, 2), math.sqrt(2))],
)
def test_point_polygon_distance(point, expected):
    assert point_polygon_distance(Point2(*point), square()) == pytest.approx(expected)


# -- angles ---------------------------------------------------------------------------

def test_angle_between_triangle_and_its_point_reflection():
    h = math.sqrt(3) / 2
    t = ConvexPolygon((Point2(0.0, 0.0), Point2(1.0, 0.0), Point2(0.5, h)))
    r = ConvexPolygon((Point2(0.0, 0.0), Point2(-1.0, 0.0), Point2(-0.5, -h)))
    angle = incident_side_angles(Point2(0.0, 0.0), t, r)
    assert angle == pytest.approx(2 * math.pi / 3)
    assert math.sin(angle) == pytest.approx(math.sin(math.pi / 3))


def test_touching_squares_meet_at_right_angle():
    assert incident_side_angles(Point2(1, 1), square(), square(1, 1)) == pytest.approx(math.pi / 2)


def test_angle_requires_a_shared_vertex():
    with pytest.raises(NotSharedVertex):
        incident_side_angles(Point2(F(1, 2), 0), square(), square(1, 0))


# -- diameter -------------------------------------------------------------------------

def test_diameter_of_empty_list():
    with pytest.raises(EmptyInput):
        diameter([])


def test_diameter_of_square():
    assert diameter(list(square().vertices)) == pytest.approx(math.sqrt(2))


coordinate = st.floats(min_value=-100, max_value=100, allow_nan=False)


@given(st.lists(st.tuples(coordinate, coordinate), min_size=1, max_size=60))
@settings(max_examples=200)
def test_diameter_matches_brute_force(coords):
    arr = np.array(coords)
    expected = np.sqrt(((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=-1).max())
    assert diameter([Point2(x, y) for x, y in coords]) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_diameter_of_many_points_on_a_circle():
    angles = np.linspace(0, 2 * np.pi, 500, endpoint=False)
    points = [Point2(3 * math.cos(t) + 1, 3 * math.sin(t) - 2) for t in angles]
    assert diameter(points) == pytest.approx(6.0, rel=1e-9)


def test_diameter_ignores_interior_points():
    rng = np.random.default_rng(7)
    inner = [Point2(float(x), float(y)) for x, y in rng.uniform(-1, 1, size=(300, 2))]
    outer = [Point2(-5.0, 0.0), Point2(5.0, 0.0)]
    assert diameter(inner + outer) == pytest.approx(10.0)

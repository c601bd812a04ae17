"""Known systems, built exactly from rationals."""

from fractions import Fraction as F
from typing import Callable, Dict

from .geometry import AffineMap2, ConvexPolygon, Point2
from .polysys import PolygonalSystem


def _p(x, y) -> Point2:
    return Point2(F(x), F(y))


def _homothety(ratio, dx=0, dy=0) -> AffineMap2:
    return AffineMap2(F(ratio), 0, 0, F(ratio), F(dx), F(dy))


def _unit_square() -> ConvexPolygon:
    return ConvexPolygon((_p(0, 0), _p(1, 0), _p(1, 1), _p(0, 1)))


def dt2() -> PolygonalSystem:
    """Triangle with one similarity and one proper affine map meeting at mid(AB)."""
    a, b, c = _p(0, 0), _p(1, 0), _p(F(1, 2), F(2, 3))
    mid = _p(F(1, 2), 0)
    return PolygonalSystem(
        ConvexPolygon((a, b, c)),
        (
            _homothety(F(1, 2)),
            AffineMap2.from_triangles((a, b, c), (c, b, mid)),
        ),
    )


def growth_fixture() -> PolygonalSystem:
    """
    Unit square, five maps. S₁ = diag(2/3, 1/3) fixes the corner (0, 0) and
    squeezes the arc from (0, 0) to (0, 1), which runs out to the fixed point
    (1, 1/2) of S₂, so its images have diameter ≈ (2/3)ⁿ between endpoints
    (1/3)ⁿ apart.
    """
    o, e, f, g = _p(0, 0), _p(1, 0), _p(1, 1), _p(0, 1)
    third = F(1, 3)
    return PolygonalSystem(
        _unit_square(),
        (
            AffineMap2(F(2, 3), 0, 0, third),
            _homothety(third, F(2, 3), third),
            AffineMap2(F(2, 3), 0, 0, third, 0, F(2, 3)),
            AffineMap2.from_triangles(
                (o, e, g), (_p(F(2, 3), third), _p(F(3, 4), F(1, 12)), _p(F(11, 12), F(1, 4))),
            ),
            AffineMap2.from_triangles(
                (o, e, g), (_p(F(2, 3), F(2, 3)), _p(F(11, 12), F(3, 4)), _p(F(3, 4), F(11, 12))),
            ),
        ),
    )


def sierpinski() -> PolygonalSystem:
    half = F(1, 2)
    return PolygonalSystem(
        ConvexPolygon((_p(0, 0), _p(1, 0), _p(0, 1))),
        (_homothety(half), _homothety(half, half, 0), _homothety(half, 0, half)),
    )


def vicsek() -> PolygonalSystem:
    """Diamond of diameter 2; four corner copies and a centre copy, ratio 1/3."""
    third, two = F(1, 3), F(2, 3)
    return PolygonalSystem(
        ConvexPolygon((_p(1, 0), _p(0, 1), _p(-1, 0), _p(0, -1))),
        (
            _homothety(third, two, 0),
            _homothety(third, 0, two),
            _homothety(third, -two, 0),
            _homothety(third, 0, -two),
            _homothety(third),
        ),
    )


def overlapping_squares() -> PolygonalSystem:
    half = F(1, 2)
    return PolygonalSystem(_unit_square(), (_homothety(half), _homothety(half, F(1, 4), F(1, 4))))


def vertex_on_edge() -> PolygonalSystem:
    """The second copy touches the first at one of its own vertices, mid-edge of the first."""
    q = F(1, 4)
    return PolygonalSystem(
        _unit_square(),
        (_homothety(F(1, 2)), AffineMap2(q, q, -q, q, F(1, 2), q)),
    )


def disjoint_squares() -> PolygonalSystem:
    third = F(1, 3)
    return PolygonalSystem(_unit_square(), (_homothety(third), _homothety(third, 2 * third, 2 * third)))


def diagonal_corners() -> PolygonalSystem:
    half = F(1, 2)
    return PolygonalSystem(_unit_square(), (_homothety(half), _homothety(half, half, half)))


def diagonal_chain() -> PolygonalSystem:
    third = F(1, 3)
    return PolygonalSystem(
        _unit_square(),
        tuple(_homothety(third, k * third, k * third) for k in range(3)),
    )


CATALOG: Dict[str, Callable[[], PolygonalSystem]] = {
    "dt2": dt2,
    "growth": growth_fixture,
    "sierpinski": sierpinski,
    "vicsek": vicsek,
    "overlapping-squares": overlapping_squares,
    "vertex-on-edge": vertex_on_edge,
    "disjoint-squares": disjoint_squares,
    "diagonal-corners": diagonal_corners,
    "diagonal-chain": diagonal_chain,
}

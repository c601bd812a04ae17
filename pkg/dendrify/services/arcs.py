"""
Arcs — finite approximations of the unique arc γ(x, y) of the dendrite.

The arc is resolved by descending to the smallest copy containing both
endpoints, walking the tree path between the children that hold them, and
recursing on every segment of that path until the cells reach the requested
depth. Consecutive cells of the resulting chain meet in exactly one point,
the junction recorded between them.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from ..config import settings
from ..errors import CoincidentEndpoints, DepthTooLarge, InvalidEndpoint
from .attractor import AddressedPoint, deepen, refine
from .geometry import IntersectionKind, Point2, convex_intersection, diameter, distance, same_point
from .polysys import (
    ADDRESS_CACHE_SIZE,
    Address,
    BipartiteIntersectionGraph,
    PolygonalSystem,
    copy_chain,
    tree_path,
    validated,
)

logger = logging.getLogger(__name__)

__all__ = [
    "ArcApproximation",
    "ArcBuilder",
    "arc",
    "arc_ratio",
    "check_chain",
    "copy_chain",
    "snap",
]


@dataclass(frozen=True)
class ArcApproximation:
    endpoints: Tuple[AddressedPoint, AddressedPoint]
    points: Tuple[Point2, Point2]
    depth: int
    chain: Tuple[Address, ...]
    junctions: Tuple[Point2, ...]
    diam_lower: float
    diam_upper: float

    @property
    def separation(self) -> float:
        return distance(*self.points)


class ArcBuilder:
    """Arc queries against one validated system; caches the junction table."""

    def __init__(self, sys: PolygonalSystem, budget: Optional[int] = None) -> None:
        self.sys = sys
        self.graph: BipartiteIntersectionGraph = validated(sys).graph
        self.budget = settings.cell_budget if budget is None else budget
        self._point = lru_cache(maxsize=ADDRESS_CACHE_SIZE)(self._denote)
        # (point node, polygon) -> vertex w with S_polygon(A_w) = junction
        self._junction_vertex: Dict[Tuple[int, int], int] = {}
        for k, point in enumerate(self.graph.point_nodes):
            for i in self.graph.polygons_at(k):
                s = sys.maps[i - 1]
                self._junction_vertex[(k, i)] = next(
                    w for w, v in enumerate(sys.vertices, start=1) if same_point(s(v), point)
                )

    # -- public -----------------------------------------------------------------

    def build(self, x: AddressedPoint, y: AddressedPoint, depth: int) -> ArcApproximation:
        for endpoint in (x, y):
            endpoint.check(self.sys)
        if depth < max(len(x.address), len(y.address)):
            raise InvalidEndpoint(
                f"depth {depth} is shallower than the endpoint addresses"
            )
        px, py = self._point(x), self._point(y)
        cells: List[Address] = []
        junctions: List[Point2] = []
        self._segment((), x, y, depth, cells, junctions)

        if same_point(px, py):
            lower = 0.0
        else:
            lower = diameter([px, py, *junctions])
        upper = diameter([v for address in cells for v in self.sys.cell(address).vertices])
        return ArcApproximation(
            endpoints=(x, y),
            points=(px, py),
            depth=depth,
            chain=tuple(cells),
            junctions=tuple(junctions),
            diam_lower=lower,
            diam_upper=max(upper, lower),
        )

    # -- recursion ---------------------------------------------------------------

    def _denote(self, p: AddressedPoint) -> Point2:
        return p.denote(self.sys)

    def _emit(self, address: Address, cells: List[Address]) -> None:
        cells.append(address)
        if len(cells) > self.budget:
            raise DepthTooLarge(len(cells), self.budget)

    def _children(self, k: Address, p: AddressedPoint, where: Point2) -> Dict[int, AddressedPoint]:
        """Children of K_k containing the point, each with an address inside it."""
        c = p.address[len(k)]
        found = {c: p}
        for node in self.graph.points_of(c):
            junction = AddressedPoint(k + (c,), self._junction_vertex[(node, c)])
            if same_point(where, self._point(junction)):
                for other in self.graph.polygons_at(node):
                    found.setdefault(
                        other, AddressedPoint(k + (other,), self._junction_vertex[(node, other)]),
                    )
        return found

    def _segment(
        self,
        k: Address,
        x: AddressedPoint,
        y: AddressedPoint,
        depth: int,
        cells: List[Address],
        junctions: List[Point2],
    ) -> None:
        if len(k) >= depth:
            self._emit(k, cells)
            return
        px, py = self._point(x), self._point(y)
        if same_point(px, py):
            # Degenerate segment: the cell of the point, chosen independently of order
            address = min(deepen(self.sys, x, depth).address, deepen(self.sys, y, depth).address)
            self._emit(address[:depth], cells)
            return

        x = deepen(self.sys, x, len(k) + 1)
        y = deepen(self.sys, y, len(k) + 1)
        cx = self._children(k, x, px)
        cy = self._children(k, y, py)
        common = sorted(set(cx) & set(cy))
        if common:
            c = common[0]
            self._segment(k + (c,), cx[c], cy[c], depth, cells, junctions)
            return

        path = tree_path(self.graph, list(cx), list(cy))
        polygons = [i for _, i in path[0::2]]
        nodes = [n for _, n in path[1::2]]
        start = cx[polygons[0]]
        for t, node in enumerate(nodes):
            here, there = polygons[t], polygons[t + 1]
            end = AddressedPoint(k + (here,), self._junction_vertex[(node, here)])
            self._segment(k + (here,), start, end, depth, cells, junctions)
            junctions.append(self._point(end))
            start = AddressedPoint(k + (there,), self._junction_vertex[(node, there)])
        last = polygons[-1]
        self._segment(k + (last,), start, cy[last], depth, cells, junctions)


def _builder(sys: PolygonalSystem) -> ArcBuilder:
    builder = sys._cache.get("arc_builder")
    if builder is None:
        builder = ArcBuilder(sys)
        sys._cache["arc_builder"] = builder
    return builder


def arc(sys: PolygonalSystem, x: AddressedPoint, y: AddressedPoint, depth: int) -> ArcApproximation:
    return _builder(sys).build(x, y, depth)


def arc_ratio(approx: ArcApproximation, lam: float) -> Tuple[float, float]:
    """(diam_lower, diam_upper) / ‖x − y‖^λ."""
    if same_point(*approx.points):
        raise CoincidentEndpoints("the arc endpoints denote the same point")
    scale = approx.separation ** lam
    return approx.diam_lower / scale, approx.diam_upper / scale


def check_chain(sys: PolygonalSystem, approx: ArcApproximation) -> bool:
    """Re-check with exact predicates that consecutive cells meet at the junction only."""
    if not sys.cell(approx.chain[0]).contains(approx.points[0]):
        return False
    if not sys.cell(approx.chain[-1]).contains(approx.points[1]):
        return False
    if len(approx.junctions) != len(approx.chain) - 1:
        return False
    for t, junction in enumerate(approx.junctions):
        hit = convex_intersection(sys.cell(approx.chain[t]), sys.cell(approx.chain[t + 1]))
        if hit.kind is not IntersectionKind.SINGLE_POINT or not same_point(hit.point, junction):
            return False
    return True


def snap(sys: PolygonalSystem, p: Point2, depth: int) -> Tuple[AddressedPoint, float]:
    """Nearest addressed point at the given depth, with the snap distance."""
    best: Optional[Tuple[float, Address, int]] = None
    for address, cell in refine(sys, depth).cells:
        s = sys.map_for(address)
        for v, vertex in enumerate(sys.vertices, start=1):
            d = distance(p, s(vertex))
            if best is None or d < best[0]:
                best = (d, address, v)
    d, address, v = best
    return AddressedPoint(address, v), d

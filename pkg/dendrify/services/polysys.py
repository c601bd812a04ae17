"""
Polygonal systems — the four defining conditions and the bipartite
intersection graph.

Polygon indices and map indices are 1-based throughout (I = {1, ..., m}).
Condition 4 (the union of the first-level polygons is simply connected) is
decided as "the bipartite intersection graph is a tree".
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

from ..errors import InvalidSystem
from .geometry import (
    AffineMap2,
    ConvexPolygon,
    IntersectionKind,
    Point2,
    apply,
    convex_intersection,
    same_point,
    stretch_factors,
)

logger = logging.getLogger(__name__)

# Composed maps and cells kept per system, least recently used evicted first
ADDRESS_CACHE_SIZE = 1 << 16

Address = Tuple[int, ...]
# Graph nodes: ("P", i) for the copy P_i, ("A", k) for the k-th connection point
Node = Tuple[str, int]


@dataclass(frozen=True)
class PolygonalSystem:
    base: ConvexPolygon
    maps: Tuple[AffineMap2, ...]
    _cache: Dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.maps) < 2:
            raise InvalidSystem(f"a system needs at least 2 maps, got {len(self.maps)}")
        for index, m in enumerate(self.maps, start=1):
            try:
                stretch_factors(m)
            except Exception as exc:
                raise InvalidSystem(f"map {index}: {exc}") from exc
        self._cache["maps"] = lru_cache(maxsize=ADDRESS_CACHE_SIZE)(self._compose)
        self._cache["cells"] = lru_cache(maxsize=ADDRESS_CACHE_SIZE)(self._image)

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def vertices(self) -> Tuple[Point2, ...]:
        return self.base.vertices

    @property
    def exact(self) -> bool:
        return all(v.exact for v in self.base.vertices) and all(s.exact for s in self.maps)

    def map_for(self, address: Address) -> AffineMap2:
        """S_𝐢 = S_{i1} ∘ ... ∘ S_{in}; the identity for the empty address."""
        return self._cache["maps"](address)

    def cell(self, address: Address) -> ConvexPolygon:
        """P_𝐢 = S_𝐢(P)."""
        return self._cache["cells"](address)

    def _compose(self, address: Address) -> AffineMap2:
        if not address:
            return AffineMap2.identity()
        return self.map_for(address[:-1]).compose(self.maps[address[-1] - 1])

    def _image(self, address: Address) -> ConvexPolygon:
        return self.base if not address else apply(self.map_for(address), self.base)

    def images(self) -> Tuple[ConvexPolygon, ...]:
        return tuple(self.cell((i,)) for i in range(1, self.m + 1))

    def conjugate(self, h: AffineMap2) -> "PolygonalSystem":
        """The system h S h⁻¹ on h(P)."""
        inverse = h.inverse()
        return PolygonalSystem(
            ConvexPolygon.from_points(h(v) for v in self.vertices),
            tuple(h.compose(s).compose(inverse) for s in self.maps),
        )


# -- Report values ----------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionPoint:
    i: int
    j: int
    point: Point2


@dataclass(frozen=True)
class Condition1Verdict:
    passed: bool
    offending_index: Optional[int] = None
    escaping_vertex: Optional[Point2] = None


@dataclass(frozen=True)
class Condition2Verdict:
    passed: bool
    uncovered: Tuple[Point2, ...] = ()


@dataclass(frozen=True)
class Condition3Verdict:
    passed: bool
    offending_pair: Optional[Tuple[int, int]] = None
    kind: Optional[IntersectionKind] = None
    point: Optional[Point2] = None
    connection_points: Tuple[ConnectionPoint, ...] = ()


@dataclass(frozen=True)
class Condition4Verdict:
    passed: bool
    skipped: bool = False
    cycle: Tuple[Node, ...] = ()
    components: Tuple[Tuple[Node, ...], ...] = ()


@dataclass(frozen=True)
class BipartiteIntersectionGraph:
    polygon_nodes: Tuple[int, ...]
    point_nodes: Tuple[Point2, ...]
    edges: Tuple[Tuple[int, int], ...]          # (polygon index, point node index)

    def nodes(self) -> List[Node]:
        return [("P", i) for i in self.polygon_nodes] + [
            ("A", k) for k in range(len(self.point_nodes))
        ]

    def adjacency(self) -> Dict[Node, List[Node]]:
        adj: Dict[Node, List[Node]] = {node: [] for node in self.nodes()}
        for i, k in self.edges:
            adj[("P", i)].append(("A", k))
            adj[("A", k)].append(("P", i))
        for neighbours in adj.values():
            neighbours.sort()
        return adj

    def polygons_at(self, k: int) -> List[int]:
        return sorted(i for i, kk in self.edges if kk == k)

    def points_of(self, i: int) -> List[int]:
        return sorted(k for ii, k in self.edges if ii == i)


@dataclass(frozen=True)
class ValidationReport:
    condition1: Condition1Verdict
    condition2: Condition2Verdict
    condition3: Condition3Verdict
    condition4: Condition4Verdict
    graph: Optional[BipartiteIntersectionGraph] = None
    boundary_in_vertices: Optional[bool] = None

    @property
    def connection_points(self) -> Tuple[ConnectionPoint, ...]:
        return self.condition3.connection_points

    @property
    def overall(self) -> bool:
        return (
            self.condition1.passed
            and self.condition2.passed
            and self.condition3.passed
            and self.condition4.passed
        )


# -- Conditions --------------------------------------------------------------------

def check_condition1(sys: PolygonalSystem) -> Condition1Verdict:
    """S_i(P) ⊂ P for every i; vertex containment suffices by convexity."""
    for i, image in enumerate(sys.images(), start=1):
        outside = [v for v in image.vertices if not sys.base.contains(v)]
        if outside:
            return Condition1Verdict(False, offending_index=i, escaping_vertex=outside[0])
    return Condition1Verdict(True)


def check_condition2(sys: PolygonalSystem) -> Condition2Verdict:
    """Every vertex of P is the image of some vertex under some map."""
    images = [s(v) for s in sys.maps for v in sys.vertices]
    uncovered = tuple(
        v for v in sys.vertices if not any(same_point(v, w) for w in images)
    )
    return Condition2Verdict(not uncovered, uncovered)


def check_condition3(sys: PolygonalSystem) -> Condition3Verdict:
    """Copies meet in at most one point, and only at a common vertex."""
    images = sys.images()
    found: List[ConnectionPoint] = []
    for i, j in combinations(range(1, sys.m + 1), 2):
        hit = convex_intersection(images[i - 1], images[j - 1])
        if hit.kind is IntersectionKind.EMPTY:
            continue
        if hit.kind is IntersectionKind.EXTENDED:
            return Condition3Verdict(False, (i, j), hit.kind)
        if images[i - 1].vertex_index(hit.point) is None or images[j - 1].vertex_index(hit.point) is None:
            return Condition3Verdict(False, (i, j), hit.kind, hit.point)
        found.append(ConnectionPoint(i, j, hit.point))
    return Condition3Verdict(True, connection_points=tuple(found))


def build_graph(
    sys: PolygonalSystem, connection_points: Tuple[ConnectionPoint, ...],
) -> BipartiteIntersectionGraph:
    """Bipartite graph {P_i} ∪ 𝒞 with an edge whenever A ∈ P_i."""
    points: List[Point2] = []
    for cp in connection_points:
        if not any(same_point(cp.point, q) for q in points):
            points.append(cp.point)
    edges = []
    images = sys.images()
    for k, point in enumerate(points):
        for i, image in enumerate(images, start=1):
            if image.contains(point):
                edges.append((i, k))
    edges.sort()
    return BipartiteIntersectionGraph(
        polygon_nodes=tuple(range(1, sys.m + 1)),
        point_nodes=tuple(points),
        edges=tuple(edges),
    )


def _components(adj: Dict[Node, List[Node]]) -> List[Tuple[Node, ...]]:
    seen = set()
    components = []
    for start in sorted(adj):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        members = []
        while queue:
            node = queue.popleft()
            members.append(node)
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        components.append(tuple(sorted(members)))
    return components


def _find_cycle(adj: Dict[Node, List[Node]]) -> Tuple[Node, ...]:
    """Iterative DFS; a back edge to a node on the stack closes a cycle."""
    visited = set()
    for root in sorted(adj):
        if root in visited:
            continue
        stack = [(root, None, iter(adj[root]))]
        on_stack = {root: 0}
        path = [root]
        visited.add(root)
        while stack:
            node, parent, neighbours = stack[-1]
            advanced = False
            for nxt in neighbours:
                if nxt == parent:
                    continue
                if nxt in on_stack:
                    return tuple(path[on_stack[nxt]:])
                if nxt not in visited:
                    visited.add(nxt)
                    on_stack[nxt] = len(path)
                    path.append(nxt)
                    stack.append((nxt, node, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                del on_stack[path.pop()]
    return ()


def check_condition4(
    graph: BipartiteIntersectionGraph, sys: PolygonalSystem,
) -> Condition4Verdict:
    """The intersection graph is connected and acyclic."""
    adj = graph.adjacency()
    components = _components(adj)
    if len(components) > 1:
        return Condition4Verdict(False, components=tuple(components))
    if len(graph.edges) != len(adj) - 1:
        return Condition4Verdict(False, cycle=_find_cycle(adj))
    return Condition4Verdict(True)


def _boundary_in_vertices(sys: PolygonalSystem, graph: BipartiteIntersectionGraph) -> bool:
    """Every preimage S_i⁻¹(A) of a connection point A ∈ P_i is a vertex of P."""
    for k, point in enumerate(graph.point_nodes):
        for i in graph.polygons_at(k):
            preimage = sys.maps[i - 1].inverse()(point)
            if sys.base.vertex_index(preimage) is None:
                return False
    return True


def validate(sys: PolygonalSystem) -> ValidationReport:
    """Run conditions 1-4 in order; the graph is only built when 3 passes."""
    c1 = check_condition1(sys)
    c2 = check_condition2(sys)
    c3 = check_condition3(sys)
    if not c3.passed:
        report = ValidationReport(c1, c2, c3, Condition4Verdict(False, skipped=True))
    else:
        graph = build_graph(sys, c3.connection_points)
        c4 = check_condition4(graph, sys)
        report = ValidationReport(
            c1, c2, c3, c4, graph=graph,
            boundary_in_vertices=_boundary_in_vertices(sys, graph),
        )
    logger.info(
        "Validated %d-map system: conditions %s -> %s",
        sys.m,
        "".join("+" if c.passed else "-" for c in (c1, c2, c3, report.condition4)),
        "pass" if report.overall else "fail",
    )
    return report


def validated(sys: PolygonalSystem) -> ValidationReport:
    """Cached validation; raises InvalidSystem unless every condition holds."""
    report = sys._cache.get("validation")
    if report is None:
        report = validate(sys)
        sys._cache["validation"] = report
    if not report.overall:
        raise InvalidSystem("system is not a simply connected polygonal system")
    return report


def copy_chain(
    graph: BipartiteIntersectionGraph, i: int, j: int,
) -> Tuple[Union[int, Point2], ...]:
    """The unique alternating polygon/point path from P_i to P_j in a tree."""
    return tuple(
        graph.point_nodes[k] if kind == "A" else k
        for kind, k in tree_path(graph, [i], [j])
    )


def tree_path(
    graph: BipartiteIntersectionGraph, sources: List[int], targets: List[int],
) -> List[Node]:
    """Shortest path (BFS) from any source polygon to any target polygon."""
    adj = graph.adjacency()
    goal = {("P", t) for t in targets}
    parent: Dict[Node, Optional[Node]] = {}
    queue = deque()
    for s in sorted(sources):
        parent[("P", s)] = None
        queue.append(("P", s))
    while queue:
        node = queue.popleft()
        if node in goal:
            path = [node]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for nxt in adj[node]:
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    raise InvalidSystem(f"no path between polygons {sources} and {targets}")

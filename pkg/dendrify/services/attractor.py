"""
Attractor — addresses of copies, Hutchinson refinements and SVG rendering.

Points of K are handled symbolically as AddressedPoints: the image
S_𝐢(A_v) of a vertex of P under a composition. Condition 2 makes every
vertex of P such an image, so each addressed point can be re-expressed at
any deeper level without rounding.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..config import settings
from ..errors import DepthTooLarge, InvalidEndpoint, InvalidSystem, PointOutside
from .geometry import ConvexPolygon, Point2, same_point
from .polysys import Address, PolygonalSystem
from .svg import SvgDocument

logger = logging.getLogger(__name__)

EMPTY_WORD = "ε"


# -- Addresses ---------------------------------------------------------------------

def check_address(address: Address, m: int) -> None:
    for letter in address:
        if not 1 <= letter <= m:
            raise InvalidEndpoint(f"letter {letter} outside 1..{m} in address {address}")


def format_address(address: Address, m: int) -> str:
    """ε for the root; letters run together for m <= 9, dot-separated above."""
    if not address:
        return EMPTY_WORD
    sep = "" if m <= 9 else "."
    return sep.join(str(letter) for letter in address)


def parse_address(text: str, m: int) -> Address:
    text = text.strip()
    if text in (EMPTY_WORD, ""):
        return ()
    parts = text.split(".") if (m > 9 or "." in text) else list(text)
    try:
        address = tuple(int(part) for part in parts)
    except ValueError:
        raise InvalidEndpoint(f"malformed address {text!r}")
    check_address(address, m)
    return address


def longest_common_prefix(a: Address, b: Address) -> Address:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return a[:n]


# -- Addressed points ------------------------------------------------------------

@dataclass(frozen=True)
class AddressedPoint:
    """The point S_address(A_vertex); vertex is a 1-based index into V."""

    address: Address
    vertex: int

    def check(self, sys: PolygonalSystem) -> None:
        check_address(self.address, sys.m)
        if not 1 <= self.vertex <= len(sys.vertices):
            raise InvalidEndpoint(
                f"vertex {self.vertex} outside 1..{len(sys.vertices)}"
            )

    def denote(self, sys: PolygonalSystem) -> Point2:
        return sys.map_for(self.address)(sys.vertices[self.vertex - 1])

    def token(self, m: int) -> str:
        return f"{format_address(self.address, m)}:{self.vertex}"

    @classmethod
    def parse(cls, token: str, sys: PolygonalSystem) -> "AddressedPoint":
        """Parse "12:3" / "ε:1" / "10.3.2:1"."""
        head, sep, tail = token.rpartition(":")
        if not sep:
            raise InvalidEndpoint(f"endpoint token {token!r} lacks ':vertex'")
        try:
            vertex = int(tail)
        except ValueError:
            raise InvalidEndpoint(f"malformed vertex in {token!r}")
        point = cls(parse_address(head, sys.m), vertex)
        point.check(sys)
        return point


def vertex_preimages(sys: PolygonalSystem) -> Dict[int, Tuple[int, int]]:
    """For each vertex v of P, the first (i, w) with S_i(A_w) = A_v."""
    table = sys._cache.get("preimages")
    if table is None:
        table = {}
        for v, target in enumerate(sys.vertices, start=1):
            for i, s in enumerate(sys.maps, start=1):
                hit = next(
                    (w for w, src in enumerate(sys.vertices, start=1) if same_point(s(src), target)),
                    None,
                )
                if hit is not None:
                    table[v] = (i, hit)
                    break
        sys._cache["preimages"] = table
    return table


def deepen(sys: PolygonalSystem, point: AddressedPoint, length: int) -> AddressedPoint:
    """Same point, re-addressed with an address of at least `length` letters."""
    table = vertex_preimages(sys)
    address, vertex = point.address, point.vertex
    while len(address) < length:
        if vertex not in table:
            raise InvalidSystem(f"vertex {vertex} is not the image of any vertex")
        letter, vertex = table[vertex]
        address = address + (letter,)
    return AddressedPoint(address, vertex)


# -- Refinement --------------------------------------------------------------------

@dataclass(frozen=True)
class Refinement:
    base: ConvexPolygon
    m: int
    depth: int
    cells: Tuple[Tuple[Address, ConvexPolygon], ...]


def _budget(budget: Optional[int]) -> int:
    return settings.cell_budget if budget is None else budget


def refine(sys: PolygonalSystem, depth: int, budget: Optional[int] = None) -> Refinement:
    """All depth-n cells P_𝐢 in lexicographic order."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    limit = _budget(budget)
    count = sys.m ** depth
    if count > limit:
        raise DepthTooLarge(count, limit)
    cells = tuple(
        (address, sys.cell(address))
        for address in product(range(1, sys.m + 1), repeat=depth)
    )
    logger.debug("Refined to depth %d: %d cells", depth, len(cells))
    return Refinement(sys.base, sys.m, depth, cells)


def locate(p: Point2, refinement: Refinement) -> List[Address]:
    found = [address for address, cell in refinement.cells if cell.contains(p)]
    if not found:
        raise PointOutside(f"({p.x}, {p.y}) lies in no depth-{refinement.depth} cell")
    return found


# -- Rendering ----------------------------------------------------------------------

def _flip(p: Point2) -> Tuple[float, float]:
    # SVG's y axis points down
    return float(p.x), -float(p.y)


def render_svg(
    refinement: Refinement,
    arcs: Optional[Sequence[Sequence[Point2]]] = None,
    highlight: Iterable[Address] = (),
) -> str:
    """One closed path per cell (id cell-<address>), then optional arc polylines."""
    x0, y0, x1, y1 = refinement.base.bounding_box()
    doc = SvgDocument((float(x0), -float(y1), float(x1 - x0), float(y1 - y0)))
    marked = set(highlight)
    stroke = format(float(max(x1 - x0, y1 - y0)) / 500, ".3g")

    doc.group_start(id="cells", fill="#d9e3f0", stroke="#1f3b5a")
    for address, cell in refinement.cells:
        attrs = {"id": f"cell-{format_address(address, refinement.m)}"}
        if address in marked:
            attrs["class"] = "chain"
            attrs["fill"] = "#f2b880"
        attrs["stroke-width"] = stroke
        doc.path([_flip(v) for v in cell.vertices], **attrs)
    doc.group_end()

    if arcs:
        doc.group_start(id="arcs", fill="none", stroke="#b2182b")
        for k, arc in enumerate(arcs):
            doc.polyline([_flip(p) for p in arc], id=f"arc-{k}", **{"stroke-width": stroke})
        doc.group_end()
    return doc.render()

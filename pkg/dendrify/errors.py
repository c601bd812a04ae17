"""Exception hierarchy shared by the services, the CLI and the HTTP surface."""

from typing import Optional, Tuple


class DendrifyError(Exception):
    """Base class for every error raised by dendrify."""


# -- Geometry -------------------------------------------------------------------

class GeometryError(DendrifyError):
    pass


class NonContractive(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class InvalidPolygon(GeometryError):
    pass


class NotSharedVertex(GeometryError):
    pass


class EmptyInput(GeometryError):
    pass


# -- Systems and attractors -------------------------------------------------------

class InvalidSystem(DendrifyError):
    """Structurally invalid system, or a system that failed validation."""


class DepthTooLarge(DendrifyError):
    def __init__(self, cells: int, budget: int) -> None:
        super().__init__(f"{cells} cells exceed the cell budget of {budget}")
        self.cells = cells
        self.budget = budget


class PointOutside(DendrifyError):
    pass


class InvalidEndpoint(DendrifyError):
    pass


class CoincidentEndpoints(DendrifyError):
    pass


# -- Certificate -----------------------------------------------------------------

class NoSeparatedPairs(DendrifyError):
    pass


class LemmaViolated(DendrifyError):
    def __init__(self, witness: Tuple[int, ...], stretch: float, bound: float) -> None:
        super().__init__(
            f"Q={stretch!r} exceeds q^lambda={bound!r} for multiindex {witness}"
        )
        self.witness = witness
        self.stretch = stretch
        self.bound = bound


# -- Input -----------------------------------------------------------------------

class SystemParseError(DendrifyError):
    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        path: Optional[str] = None,
    ) -> None:
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.path = path

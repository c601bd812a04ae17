"""
System definition files — JSON with exact rational literals.

    {"polygon": [[0, 0], [1, 0], ["1/2", "2/3"]],
     "maps": [{"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0, "f": 0}, ...]}

Decimal literals are read as the exact rational they spell; "p/q" strings
are exact rationals.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError

from ..errors import DendrifyError, SystemParseError
from .geometry import AffineMap2, ConvexPolygon, Point2
from .polysys import PolygonalSystem

logger = logging.getLogger(__name__)


def parse_number(value: Any) -> Fraction:
    """ints, decimal floats/strings and "p/q" strings, all as exact Fractions."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # json.loads(parse_float=Fraction) never produces these; direct callers might
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a number: {value!r}")
    raise ValueError(f"not a number: {value!r}")


Rational = Annotated[Fraction, BeforeValidator(parse_number)]


class MapDefinition(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    a: Rational
    b: Rational
    c: Rational
    d: Rational
    e: Rational = Fraction(0)
    f: Rational = Fraction(0)


class SystemDefinition(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    polygon: List[Tuple[Rational, Rational]]
    maps: List[MapDefinition]


def _dotted(loc: Tuple[Union[str, int], ...]) -> str:
    return ".".join(str(part) for part in loc)


def _build(definition: SystemDefinition) -> PolygonalSystem:
    try:
        base = ConvexPolygon.from_points(Point2(x, y) for x, y in definition.polygon)
    except DendrifyError as exc:
        raise SystemParseError(str(exc), path="polygon") from exc
    maps = []
    for index, spec in enumerate(definition.maps):
        try:
            maps.append(AffineMap2(spec.a, spec.b, spec.c, spec.d, spec.e, spec.f))
        except DendrifyError as exc:
            raise SystemParseError(str(exc), path=f"maps.{index}") from exc
    try:
        return PolygonalSystem(base, tuple(maps))
    except DendrifyError as exc:
        raise SystemParseError(str(exc), path="maps") from exc


def parse_system(text: str) -> PolygonalSystem:
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise SystemParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    try:
        definition = SystemDefinition.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise SystemParseError(first["msg"], path=_dotted(first["loc"]) or "<root>") from exc
    return _build(definition)


def load_system(path: Union[str, Path]) -> PolygonalSystem:
    """Raises OSError for unreadable files and SystemParseError for bad contents."""
    path = Path(path)
    sys = parse_system(path.read_text(encoding="utf-8"))
    logger.info("Loaded %d-map system on a %d-gon from %s", sys.m, len(sys.vertices), path)
    return sys


def _literal(value: Any) -> Union[int, str, float]:
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return float(value)


def dump_system(sys: PolygonalSystem) -> Dict[str, Any]:
    """Inverse of parse_system: exact values as ints or "p/q" strings."""
    return {
        "polygon": [[_literal(v.x), _literal(v.y)] for v in sys.vertices],
        "maps": [
            {k: _literal(getattr(s, k)) for k in ("a", "b", "c", "d", "e", "f")}
            for s in sys.maps
        ],
    }

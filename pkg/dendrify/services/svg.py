"""Minimal deterministic SVG 1.1 writer (string building, fixed attribute order)."""

from typing import Dict, List, Sequence, Tuple

from ..config import settings


def fmt(value: float, digits: int = 0) -> str:
    text = format(float(value), f".{digits or settings.svg_digits}g")
    return "0" if text == "-0" else text


def _attrs(attrs: Dict[str, str]) -> str:
    return " ".join(f'{key}="{value}"' for key, value in attrs.items())


class SvgDocument:
    def __init__(self, view_box: Tuple[float, float, float, float]) -> None:
        self._view_box = view_box
        self._body: List[str] = []

    def group_start(self, **attrs: str) -> None:
        self._body.append(f"<g {_attrs(attrs)}>")

    def group_end(self) -> None:
        self._body.append("</g>")

    def path(self, points: Sequence[Tuple[float, float]], closed: bool = True, **attrs: str) -> None:
        head, *tail = points
        d = [f"M {fmt(head[0])} {fmt(head[1])}"]
        d += [f"L {fmt(x)} {fmt(y)}" for x, y in tail]
        if closed:
            d.append("Z")
        self._body.append(f'<path {_attrs(attrs)} d="{" ".join(d)}"/>')

    def polyline(self, points: Sequence[Tuple[float, float]], **attrs: str) -> None:
        coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self._body.append(f'<polyline {_attrs(attrs)} points="{coords}"/>')

    def render(self) -> str:
        x, y, w, h = self._view_box
        head = [
            '<?xml version="1.0" standalone="no"?>',
            '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
            '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
            f'<svg version="1.1" xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{fmt(x)} {fmt(y)} {fmt(w)} {fmt(h)}">',
        ]
        return "\n".join(head + self._body + ["</svg>", ""])

"""Shared fixtures: the catalog systems and their definition files."""

import json

import pytest

from dendrify.services import catalog
from dendrify.services.geometry import AffineMap2, ConvexPolygon, Point2
from dendrify.services.loader import dump_system
from dendrify.services.polysys import PolygonalSystem


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale verification runs")


@pytest.fixture
def dt2():
    return catalog.dt2()


@pytest.fixture
def dt2_floats():
    """DT2 entered with binary floating-point coordinates."""
    a, b, c = Point2(0.0, 0.0), Point2(1.0, 0.0), Point2(0.5, 2 / 3)
    mid = Point2(0.5, 0.0)
    return PolygonalSystem(
        ConvexPolygon((a, b, c)),
        (AffineMap2(0.5, 0.0, 0.0, 0.5), AffineMap2.from_triangles((a, b, c), (c, b, mid))),
    )


@pytest.fixture
def gf():
    return catalog.growth_fixture()


@pytest.fixture
def sierpinski():
    return catalog.sierpinski()


@pytest.fixture
def vicsek():
    return catalog.vicsek()


@pytest.fixture
def overlapping():
    return catalog.overlapping_squares()


@pytest.fixture
def disjoint():
    return catalog.disjoint_squares()


@pytest.fixture
def system_file(tmp_path):
    """Write a catalog system as a definition file and return its path."""

    def write(name: str) -> str:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(dump_system(catalog.CATALOG[name]()), indent=2))
        return str(path)

    return write

import json
from fractions import Fraction as F

import pytest

from dendrify.errors import SystemParseError
from dendrify.services import catalog
from dendrify.services.geometry import Point2
from dendrify.services.loader import dump_system, load_system, parse_number, parse_system

DT2_TEXT = """{
  "polygon": [[0, 0], [1, 0], ["1/2", "2/3"]],
  "maps": [
    {"a": 0.5, "b": 0, "c": 0, "d": 0.5},
    {"a": "1/2", "b": "-3/8", "c": "-2/3", "d": -0.5, "e": 0.5, "f": "2/3"}
  ]
}"""


@pytest.mark.parametrize(
    "value, expected",
    [(3, F(3)), ("0.1", F(1, 10)), (F(1, 10), F(1, 10)), ("-7/3", F(-7, 3)), (0.25, F(1, 4))],
)
def test_parse_number(value, expected):
    assert parse_number(value) == expected


@pytest.mark.parametrize("value", [True, "abc", "1/0", None, [1]])
def test_parse_number_rejects(value):
    with pytest.raises(ValueError):
        parse_number(value)


def test_decimals_are_exact():
    sys = parse_system('{"polygon": [[0, 0], [1, 0], [0, 1]], '
                       '"maps": [{"a": 0.1, "b": 0, "c": 0, "d": 0.1}, '
                       '{"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0.5}]}')
    assert sys.maps[0].a == F(1, 10)
    assert sys.exact


def test_parses_the_catalog_system():
    assert parse_system(DT2_TEXT) == catalog.dt2()


def test_clockwise_polygon_is_reoriented():
    sys = parse_system('{"polygon": [[0, 0], [0, 1], [1, 0]], '
                       '"maps": [{"a": 0.5, "b": 0, "c": 0, "d": 0.5}, '
                       '{"a": 0.5, "b": 0, "c": 0, "d": 0.5, "e": 0.5}]}')
    assert sys.vertices == (Point2(1, 0), Point2(0, 1), Point2(0, 0))


def test_syntax_error_carries_position():
    with pytest.raises(SystemParseError) as info:
        parse_system('{"polygon": [[0, 0],\n  [1, 0]')
    assert info.value.line == 2
    assert info.value.column is not None


def test_missing_field_carries_path():
    with pytest.raises(SystemParseError) as info:
        parse_system('{"polygon": [[0, 0], [1, 0], [0, 1]], "maps": [{"a": 1, "b": 0, "c": 0}]}')
    assert info.value.path == "maps.0.d"


def test_bad_polygon():
    with pytest.raises(SystemParseError) as info:
        parse_system('{"polygon": [[0, 0], [1, 0], [2, 0]], "maps": []}')
    assert info.value.path == "polygon"


def test_single_map_is_structurally_invalid():
    with pytest.raises(SystemParseError):
        parse_system('{"polygon": [[0, 0], [1, 0], [0, 1]], "maps": [{"a": 0.5, "b": 0, "c": 0, "d": 0.5}]}')


@pytest.mark.parametrize("name", sorted(catalog.CATALOG))
def test_dump_and_load(name, tmp_path):
    original = catalog.CATALOG[name]()
    path = tmp_path / "system.json"
    path.write_text(json.dumps(dump_system(original)))
    assert load_system(path) == original


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_system(tmp_path / "absent.json")


def test_unknown_top_level_key_is_rejected():
    text = DT2_TEXT.replace('"maps"', '"polgon_typo": [], "maps"', 1)
    with pytest.raises(SystemParseError) as info:
        parse_system(text)
    assert info.value.path == "polgon_typo"

"""Command line: reports on stdout, exit-code contract, output files."""

import json

import pytest

from dendrify.cli import main
from dendrify.config import settings


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_validate_dt2(capsys, system_file):
    code, out = run(capsys, "validate", system_file("dt2"))
    assert code == 0
    report = json.loads(out)
    assert report["overall"] is True
    assert len(report["connection_points"]) == 1
    assert report["version"]


def test_validate_sierpinski_names_the_cycle(capsys, system_file):
    code, out = run(capsys, "validate", system_file("sierpinski"))
    assert code == 2
    report = json.loads(out)
    assert report["condition4"]["passed"] is False
    assert report["condition4"]["detail"].startswith("cycle")


def test_validate_malformed_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"polygon": [')
    code, out = run(capsys, "validate", str(path))
    assert code == 1
    assert out == ""


def test_validate_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 1


def test_certify(capsys, system_file):
    code, out = run(capsys, "certify", system_file("dt2"), "--beta-depth", "3")
    assert code == 0
    report = json.loads(out)
    assert 0 < report["lambda"] < 1
    assert report["beta_depth"] == 3
    assert len(report["per_map"]) == 2


def test_certify_similarity_system(capsys):
    code, out = run(capsys, "certify", "catalog:vicsek", "--beta-depth", "2")
    assert code == 0
    assert json.loads(out)["lambda"] == 1.0


def test_certify_invalid_system(capsys, system_file):
    code, _ = run(capsys, "certify", system_file("sierpinski"))
    assert code == 2


def test_verify_is_reproducible(capsys, system_file):
    path = system_file("dt2")
    argv = ("verify", path, "--samples", "40", "--depth", "5", "--seed", "9",
            "--beta-depth", "3", "--lemma-trials", "100")
    code, first = run(capsys, *argv)
    assert code == 0
    _, second = run(capsys, *argv)
    assert first == second
    report = json.loads(first)
    assert report["seed"] == 9
    assert report["lemma1"]["violations"] == 0
    assert report["evaluated"] == 40


def test_verify_with_lambda_override(capsys):
    code, out = run(capsys, "verify", "catalog:growth", "--samples", "20", "--depth", "4",
                    "--beta-depth", "2", "--lemma-trials", "50", "--lambda-override", "1")
    assert code == 0
    report = json.loads(out)
    assert report["lambda"] == 1.0
    assert report["lambda_overridden"] is True
    assert report["lemma1"]["violations"] == 1


def test_verify_budget(capsys, monkeypatch, system_file):
    monkeypatch.setattr(settings, "cell_budget", 1)
    code, _ = run(capsys, "verify", system_file("dt2"), "--samples", "5", "--depth", "4",
                  "--beta-depth", "2", "--lemma-trials", "0")
    assert code == 3


def test_render(capsys, tmp_path, system_file):
    out = tmp_path / "dt2.svg"
    code, _ = run(capsys, "render", system_file("dt2"), "--depth", "3", "-o", str(out))
    assert code == 0
    assert out.read_text().count("<path ") == 8
    assert not (tmp_path / "dt2.svg.tmp").exists()


def test_render_invalid_system(capsys, tmp_path):
    out = tmp_path / "sierpinski.svg"
    code, _ = run(capsys, "render", "catalog:sierpinski", "--depth", "2", "-o", str(out))
    assert code == 2
    assert not out.exists()


def test_render_arc_twice_gives_identical_files(capsys, tmp_path, system_file):
    path = system_file("dt2")
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    code, out = run(capsys, "render", path, "--depth", "3", "--arc", "ε:1", "ε:2", "-o", str(first))
    assert code == 0
    assert json.loads(out)["endpoints"] == ["ε:1", "ε:2"]
    run(capsys, "render", path, "--depth", "3", "--arc", "ε:1", "ε:2", "-o", str(second))
    assert first.read_text() == second.read_text()
    assert 'id="arc-0"' in first.read_text()


def test_render_bad_token(capsys, tmp_path, system_file):
    out = tmp_path / "x.svg"
    code, _ = run(capsys, "render", system_file("dt2"), "--depth", "2", "--arc", "13:1", "ε:2", "-o", str(out))
    assert code == 2
    assert not out.exists()


def test_render_cell_budget(capsys, monkeypatch, tmp_path, system_file):
    monkeypatch.setattr(settings, "cell_budget", 4)
    out = tmp_path / "x.svg"
    code, _ = run(capsys, "render", system_file("dt2"), "--depth", "3", "-o", str(out))
    assert code == 3
    assert not out.exists()


def test_growth(capsys):
    code, out = run(capsys, "growth", "catalog:growth", "--n-max", "4", "--extra-depth", "4")
    assert code == 0
    ratios = [row["ratio"] for row in json.loads(out)["rows"]]
    assert len(ratios) == 4
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_catalog_listing_and_export(capsys):
    code, out = run(capsys, "catalog")
    assert code == 0
    assert "dt2" in out.split()
    code, out = run(capsys, "catalog", "dt2")
    assert json.loads(out)["polygon"][2] == ["1/2", "2/3"]


@pytest.mark.parametrize("source", ["catalog:nonexistent"])
def test_unknown_catalog_name(capsys, source):
    code, _ = run(capsys, "validate", source)
    assert code == 1


def test_verify_with_invariance_check(capsys, system_file):
    code, out = run(capsys, "verify", system_file("dt2"), "--samples", "12", "--depth", "4",
                    "--beta-depth", "2", "--lemma-trials", "0", "--invariance-trials", "10")
    assert code == 0
    invariance = json.loads(out)["invariance"]
    assert invariance["trials"] == 10
    assert invariance["holds"] is True

import pytest

from dendrify.services.report_store import write_atomic


def test_write_creates_parents(tmp_path):
    target = tmp_path / "out" / "nested" / "cells.svg"
    assert write_atomic(target, "<svg/>") == target
    assert target.read_text() == "<svg/>"
    assert not (target.parent / "cells.svg.tmp").exists()


def test_overwrite_replaces_contents(tmp_path):
    target = tmp_path / "report.json"
    write_atomic(target, "{}")
    write_atomic(target, '{"overall": true}')
    assert target.read_text() == '{"overall": true}'


def test_failed_write_leaves_nothing_behind(tmp_path, monkeypatch):
    target = tmp_path / "report.json"

    def refuse(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr("dendrify.services.report_store.os.replace", refuse)
    with pytest.raises(OSError):
        write_atomic(target, "{}")
    assert list(tmp_path.iterdir()) == []

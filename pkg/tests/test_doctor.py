from __future__ import annotations

from resupal.doctor import check_limits_env, check_python_version, check_smoke, format_report


def test_check_python_version_ok():
    res = check_python_version(3, 8)
    assert res.ok


def test_check_python_version_too_old():
    res = check_python_version(99, 0)
    assert not res.ok
    assert res.fix


def test_check_limits_env_default(no_limits_env):
    res = check_limits_env()
    assert res.ok
    assert "default" in res.message


def test_check_limits_env_override(monkeypatch):
    monkeypatch.setenv("RESUPAL_BOUND", "1_000")
    res = check_limits_env()
    assert res.ok
    assert "1000 (environment)" in res.message


def test_check_limits_env_bad_value(monkeypatch):
    monkeypatch.setenv("RESUPAL_BOUND", "lots")
    res = check_limits_env()
    assert not res.ok
    assert "RESUPAL_BOUND" in res.message


def test_check_smoke():
    res = check_smoke()
    assert res.ok, res.message


def test_format_report_marks_failures(monkeypatch):
    monkeypatch.setenv("RESUPAL_SEED", "-1")
    ok, lines = format_report()
    assert not ok
    assert any(line.startswith("✗ limits") for line in lines)
    assert lines[0].startswith("✓ python")


def test_format_report_dev_adds_test_dependencies(no_limits_env):
    ok, lines = format_report(dev=True)
    assert ok
    assert any("hypothesis" in line for line in lines)

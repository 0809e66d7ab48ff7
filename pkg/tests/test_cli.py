"""End-to-end runs of the ``resupal`` command through :func:`resupal.cli.main`."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from resupal.algebra_file import load_algebra
from resupal.catalog import catalog_get
from resupal.cli import build_parser, main


def _run(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as info:
        main(argv)
    return int(info.value.code)


def _write(path: Path, doc: dict) -> str:
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_parser_defaults() -> None:
    args = build_parser().parse_args(["invariants", "catalog:L_{2|2}^a"])
    assert args.p == [3, 5, 7, 11]
    assert args.out_format == "txt"
    args = build_parser().parse_args(["reproduce", "--p", "7,3"])
    assert args.p == [3, 7]


def test_no_command_prints_help(capsys) -> None:
    assert _run([]) == 0
    assert "usage" in capsys.readouterr().out


def test_check_catalog_algebra(capsys) -> None:
    assert _run(["check", "catalog:L_{2|2}^4(b)", "--p", "5"]) == 0
    out = capsys.readouterr().out
    assert "✓ bracket axioms" in out
    assert "p-nilpotent: yes" in out


def test_check_reports_violations(tmp_path: Path, capsys) -> None:
    bad = {"p": 3, "even": ["e1", "e2"], "brackets": [{"left": "e1", "right": "e1", "value": {"e2": 1}}]}
    assert _run(["check", _write(tmp_path / "bad.json", bad)]) == 1
    assert "✗" in capsys.readouterr().out


def test_check_input_errors(tmp_path: Path, capsys) -> None:
    assert _run(["check", str(tmp_path / "missing.json")]) == 2
    assert "ERROR" in capsys.readouterr().err
    assert _run(["check", "catalog:L_{9|9}^q"]) == 2


def test_extend_writes_an_algebra(tmp_path: Path, capsys) -> None:
    out = tmp_path / "ext.json"
    code = _run(["extend", "catalog:L_{1|2}^1", "--cocycle", "Δ23", "-o", str(out)])
    assert code == 0
    assert "OK ->" in capsys.readouterr().out
    assert load_algebra(str(out)).algebra == catalog_get("L_{2|2}^b", 3).algebra


def test_extend_restricted_with_omega(capsys) -> None:
    code = _run(["extend", "catalog:L_{1|2}^2(a)", "--cocycle", "Δ22", "--omega", "e1=1"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["even"] == ["e1", "X"]
    assert doc["pmap"]["e1"] == {"X": 1}


def test_extend_rejects_non_cocycles(capsys) -> None:
    assert _run(["extend", "catalog:L_{1|2}^4", "--cocycle", "Δ12"]) == 1
    assert "ERROR" in capsys.readouterr().err


def test_extend_omega_needs_a_p_map(capsys) -> None:
    assert _run(["extend", "catalog:L_{1|2}^1", "--cocycle", "Δ23", "--omega", "e1=1"]) == 2


def test_isomorphic_exit_codes(capsys) -> None:
    assert _run(["isomorphic", "catalog:L_{2|2}^f", "catalog:L_{2|2}^l"]) == 0
    assert "isomorphic over" in capsys.readouterr().out
    assert _run(["isomorphic", "catalog:L_{2|2}^b", "catalog:L_{2|2}^c"]) == 3
    assert "center" in capsys.readouterr().out


def test_cohomology_output(capsys) -> None:
    assert _run(["cohomology", "catalog:L_{2|1}^2", "--degree", "2"]) == 0
    out = capsys.readouterr().out
    assert "dim H2 = 0|1" in out
    assert "[odd]" in out


def test_restricted_cohomology_output(capsys) -> None:
    code = _run(["cohomology", "catalog:L_{1|2}^3(a)", "--restricted", "--coeff", "adjoint"])
    assert code == 0
    assert "dim H2* = 5" in capsys.readouterr().out
    assert _run(["cohomology", "catalog:L_{1|2}^3(a)", "--restricted", "--degree", "3"]) == 2


def test_pmaps_classes(capsys) -> None:
    assert _run(["pmaps", "catalog:L_{2|1}^2"]) == 0
    assert "3 class(es)" in capsys.readouterr().out


def test_orbits_table(capsys) -> None:
    assert _run(["orbits", "catalog:L_{2|1}^2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1].split() == ["orbit", "parity", "size", "representative"]


def test_catalog_listing(capsys) -> None:
    assert _run(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "L_{2|2}^l" in out
    assert "K^{n,m}" in out
    assert _run(["catalog", "--show", "L_{2|2}^4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc["pmaps"]) == {"a", "b"}


def test_reproduce_k_families(tmp_path: Path, capsys) -> None:
    code = _run(["reproduce", "--tables", "K-families", "--p", "3", "--out-dir", str(tmp_path), "--out-format", "md"])
    assert code == 0
    text = (tmp_path / "K-families.md").read_text(encoding="utf-8")
    assert text.startswith("| family |")
    assert _run(["reproduce", "--tables", "nope", "--out-dir", str(tmp_path)]) == 2


def test_invariants_table(capsys, tmp_path: Path) -> None:
    code = _run(["invariants", "catalog:L_{2|2}^h", "--p", "3,5", "--cache-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "1|1 (1|2 if p=3)" in out


def test_bound_exceeded_is_inconclusive(monkeypatch, capsys) -> None:
    monkeypatch.setenv("RESUPAL_BOUND", "2")
    assert _run(["isomorphic", "catalog:L_{2|2}^f", "catalog:L_{2|2}^l"]) == 4
    assert "RESUPAL_BOUND" in capsys.readouterr().err


def test_exhaustive_flag(capsys) -> None:
    assert not build_parser().parse_args(["check", "catalog:L_{2|1}^2"]).exhaustive
    assert _run(["check", "catalog:L_{2|2}^4(b)", "--exhaustive"]) == 0
    assert "p-nilpotent: yes" in capsys.readouterr().out
    assert _run(["pmaps", "catalog:L_{2|1}^2", "--exhaustive"]) == 0
    assert "3 class(es)" in capsys.readouterr().out

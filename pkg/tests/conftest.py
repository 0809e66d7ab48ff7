"""
Configure the test environment to locate the package under ``src``.

The ``src`` directory goes on ``sys.path`` so ``import resupal`` resolves to
the local source tree without installing the package first.  Tests marked
``slow`` (the p = 11 tables) are skipped unless ``--runslow`` is given.
"""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

_SRC = (Path(__file__).resolve().parents[1] / "src").as_posix()
if _SRC not in sys.path:
    sys.path.insert(0, _SRC)


def pytest_addoption(parser) -> None:
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items) -> None:
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def no_limits_env(monkeypatch):
    """Tests that depend on the default limits must not see RESUPAL_* overrides."""
    monkeypatch.delenv("RESUPAL_BOUND", raising=False)
    monkeypatch.delenv("RESUPAL_SEED", raising=False)

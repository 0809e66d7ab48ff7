"""
Diagnostics and environment checks for resupal.

This module powers the `resupal doctor` command. It checks:
- Python version
- numpy availability and integer width
- RESUPAL_BOUND / RESUPAL_SEED parse
- Optional test dependencies (pytest, hypothesis)
- A smoke computation on a built-in algebra

Imports of the computational modules happen inside the checks so a broken
numpy install is reported instead of crashing the command.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    name: str
    message: str
    fix: str | None = None


def check_python_version(min_major: int = 3, min_minor: int = 9) -> CheckResult:
    major, minor = sys.version_info[:2]
    if (major, minor) < (min_major, min_minor):
        return CheckResult(
            ok=False,
            name="python",
            message=f"Python {major}.{minor} is too old (need {min_major}.{min_minor}+)",
            fix=f"Install Python {min_major}.{min_minor}+ and recreate your venv",
        )
    return CheckResult(ok=True, name="python", message=f"Python {major}.{minor} OK")


def check_numpy() -> CheckResult:
    try:
        import numpy as np
    except Exception:
        return CheckResult(
            ok=False,
            name="numpy",
            message="numpy not installed",
            fix="pip install resupal (or: pip install -r requirements.txt)",
        )
    if np.dtype(np.int64).itemsize != 8:  # pragma: no cover
        return CheckResult(ok=False, name="numpy", message="int64 is not 64 bits wide")
    return CheckResult(ok=True, name="numpy", message=f"numpy {np.__version__} installed")


def check_limits_env() -> CheckResult:
    from .config import ENV_BOUND, ENV_SEED, Limits
    from .errors import ConfigError

    try:
        limits = Limits.from_env()
    except ConfigError as exc:
        return CheckResult(
            ok=False,
            name="limits",
            message=str(exc),
            fix=f"unset {ENV_BOUND}/{ENV_SEED} or set them to positive integers",
        )
    source = "environment" if os.getenv(ENV_BOUND) else "default"
    return CheckResult(
        ok=True,
        name="limits",
        message=f"enumeration bound {limits.enum_bound} ({source}), seed {limits.seed}",
    )


def _check_optional(module: str, name: str) -> CheckResult:
    try:
        __import__(module)
        return CheckResult(ok=True, name=name, message=f"{name} installed")
    except Exception:
        return CheckResult(
            ok=False,
            name=name,
            message=f"{name} not installed (needed only for the test suite)",
            fix="pip install -e '.[dev]'",
        )


def check_test_deps() -> list[CheckResult]:
    return [_check_optional("pytest", "pytest"), _check_optional("hypothesis", "hypothesis")]


def check_smoke() -> CheckResult:
    """Verify L_{1|2}^4 with its p-map over F_3."""
    try:
        from .catalog import catalog_restricted
        from .liesuper import check_axioms
        from .restricted import check_pmap_axioms

        R = catalog_restricted("L_{1|2}^4", 3)
        report = check_axioms(R.algebra)
        report.extend(check_pmap_axioms(R.algebra, R.pmap))
    except Exception as exc:  # noqa: BLE001
        return CheckResult(
            ok=False,
            name="smoke",
            message=f"computation failed: {exc}",
            fix="reinstall resupal; run the test suite to locate the failure",
        )
    if report:
        return CheckResult(ok=False, name="smoke", message=report.lines()[0])
    return CheckResult(ok=True, name="smoke", message="L_{1|2}^4 verified over F_3")


def run_checks(dev: bool = False) -> list[CheckResult]:
    """
    Run the runtime checks; ``dev`` adds the test dependencies.
    """
    checks: list[CheckResult] = [check_python_version(), check_numpy()]
    if not checks[-1].ok:
        return checks
    checks.append(check_limits_env())
    checks.append(check_smoke())
    if dev:
        checks.extend(check_test_deps())
    return checks


def format_report(dev: bool = False) -> tuple[bool, list[str]]:
    """
    Returns (overall_ok, lines) for printing in CLI.
    """
    results = run_checks(dev)
    overall_ok = all(r.ok for r in results)

    lines: list[str] = []
    for r in results:
        status = "✓" if r.ok else "✗"
        line = f"{status} {r.name}: {r.message}"
        if (not r.ok) and r.fix:
            line += f" ({r.fix})"
        lines.append(line)

    return overall_ok, lines

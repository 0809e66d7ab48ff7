"""Violation reports returned by the verifiers."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    check: str
    message: str


@dataclass
class Report:
    """Ordered list of violations; an empty report means "valid".

    ``bool(report)`` is true when something was violated, so callers write
    ``if report: ...`` to react to failures.
    """

    violations: list[Violation] = field(default_factory=list)

    def add(self, check: str, message: str) -> None:
        self.violations.append(Violation(check, message))

    def extend(self, other: Report | Iterable[Violation]) -> None:
        items = other.violations if isinstance(other, Report) else other
        self.violations.extend(items)

    def checks(self) -> set[str]:
        return {v.check for v in self.violations}

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def lines(self) -> list[str]:
        return [f"{v.check}: {v.message}" for v in self.violations]

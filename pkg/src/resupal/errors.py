"""Exception types raised by resupal.

Mathematical violations found by the verifiers are *not* exceptions: they
come back as :class:`resupal.report.Report` objects.  The classes below cover
malformed input, unsupported requests and exhausted enumeration budgets.
"""

from __future__ import annotations

from typing import Any


class ResupalError(Exception):
    """Base class for every error raised by the package."""


class InvalidField(ResupalError, ValueError):
    pass


class MixedFields(ResupalError, TypeError):
    pass


class DivisionByZero(ResupalError, ZeroDivisionError):
    pass


class DimensionMismatch(ResupalError, ValueError):
    pass


class DegreeMismatch(ResupalError, ValueError):
    pass


class OddInput(ResupalError, ValueError):
    """An even vector was required (p-maps live on the even part)."""


class UnknownName(ResupalError, KeyError):
    pass


class UnsupportedPair(ResupalError, ValueError):
    pass


class BoundExceeded(ResupalError, RuntimeError):
    """An enumeration would exceed the configured bound."""

    def __init__(self, what: str, size: int, bound: int) -> None:
        super().__init__(f"{what}: {size} candidates exceeds bound {bound}")
        self.what = what
        self.size = size
        self.bound = bound


class NotACocycle(ResupalError, ValueError):
    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class NotRestricted(ResupalError, ValueError):
    """Candidate p|2p-map values fail the restricted axioms."""

    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class BaseMismatch(ResupalError, ValueError):
    pass


class NotCentral(ResupalError, ValueError):
    pass


class NotPClosed(ResupalError, ValueError):
    pass


class NoCenter(ResupalError, ValueError):
    pass


class NotAutomorphism(ResupalError, ValueError):
    pass


class NotFoundOverField(ResupalError, LookupError):
    """Exhaustive search over F_q found no witness.

    This is not a proof of non-isomorphism over the algebraic closure.
    """


class LoadError(ResupalError, ValueError):
    pass


class ConfigError(ResupalError, ValueError):
    pass

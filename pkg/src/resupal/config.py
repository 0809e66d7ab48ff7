"""Enumeration limits and sampling configuration.

Every bound that decides between exhaustive and sampled verification lives
here, so one environment variable changes the behaviour of the whole
package:

``RESUPAL_BOUND``
    Overrides :attr:`Limits.enum_bound`, the cap on automorphism and orbit
    enumerations, and :attr:`Limits.pmap_bound`, the cap on p-map candidates.
``RESUPAL_SEED``
    Seed for the random samples drawn by the verifiers.

When a vector space has more than :attr:`Limits.exhaustive_bound` elements the
verifiers check basis vectors plus random samples; :meth:`Limits.exhaustive`
lifts that bound for callers (the CLI `--exhaustive` flag) that want every
vector visited.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError

ENV_BOUND = "RESUPAL_BOUND"
ENV_SEED = "RESUPAL_SEED"


@dataclass(frozen=True)
class Limits:
    enum_bound: int = 10**7
    exhaustive_bound: int = 2000
    random_samples: int = 500
    pmap_bound: int = 20000
    seed: int = 0

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> Limits:
        env = os.environ if environ is None else environ
        limits = cls()
        raw = env.get(ENV_BOUND)
        if raw:
            bound = _positive_int(ENV_BOUND, raw)
            limits = replace(limits, enum_bound=bound, pmap_bound=bound)
        raw = env.get(ENV_SEED)
        if raw:
            limits = replace(limits, seed=_positive_int(ENV_SEED, raw, allow_zero=True))
        return limits

    def exhaustive(self) -> Limits:
        """The same limits with sampling switched off."""
        return replace(self, exhaustive_bound=sys.maxsize)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _positive_int(name: str, raw: str, allow_zero: bool = False) -> int:
    try:
        value = int(raw.strip().replace("_", ""))
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 0 or (value == 0 and not allow_zero):
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def current_limits() -> Limits:
    return Limits.from_env()
